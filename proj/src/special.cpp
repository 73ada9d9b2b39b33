#include "brokenline/special.hpp"

#include <cmath>
#include <vector>

namespace brokenline {

namespace {

// log of the scaled integrand e^{-x(cosh t - 1)} cosh(nu t), without the 1/2 split
double log_integrand(double nu, double x, double t) {
  return -x * (std::cosh(t) - 1) + nu * t + std::log1p(std::exp(-2 * nu * t)) - std::log(2.0);
}

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6 * (fa + 4 * fm + fb);
}

template <class F>
double adaptive_simpson(F& f, double a, double b, double tol) {
  struct Seg { double a, fa, m, fm, b, fb, whole, tol; int depth; };
  double total = 0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  std::vector<Seg> stack{{a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb), tol, 0}};
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double lm = 0.5 * (s.a + s.m), rm = 0.5 * (s.m + s.b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(s.a, s.fa, flm, s.m, s.fm);
    const double right = simpson(s.m, s.fm, frm, s.b, s.fb);
    const double diff = left + right - s.whole;
    if (s.depth >= 40 || std::abs(diff) <= 15 * s.tol) {
      total += left + right + diff / 15;
    } else {
      stack.push_back({s.a, s.fa, lm, flm, s.m, s.fm, left, s.tol / 2, s.depth + 1});
      stack.push_back({s.m, s.fm, rm, frm, s.b, s.fb, right, s.tol / 2, s.depth + 1});
    }
  }
  return total;
}

}  // namespace

double bessel_k(double nu, double x) {
  if (!(x > 0) || !std::isfinite(x)) throw InvalidParameter("bessel_k needs x > 0");
  nu = std::abs(nu);
  if (!(nu <= 5)) throw InvalidParameter("bessel_k supports |nu| <= 5");

  // peak of the exponent nu t - x(cosh t - 1) sits at sinh t = nu / x
  const double tpeak = std::asinh(nu / x);
  const double peak = log_integrand(nu, x, tpeak);
  double tmax = std::max(1.0, 2 * tpeak);
  while (log_integrand(nu, x, tmax) > peak - 40) tmax *= 1.5;

  auto f = [&](double t) { return std::exp(log_integrand(nu, x, t) - peak); };
  // coarse pass fixes the scale for the relative tolerance
  const int panels = 32;
  double coarse = 0;
  for (int i = 0; i < panels; ++i) {
    const double a = tmax * i / panels, b = tmax * (i + 1) / panels;
    coarse += simpson(a, f(a), f(0.5 * (a + b)), b, f(b));
  }
  double sum = 0;
  for (int i = 0; i < panels; ++i)
    sum += adaptive_simpson(f, tmax * i / panels, tmax * (i + 1) / panels, 1e-13 * coarse / panels);
  return sum * std::exp(peak - x);
}

DeficiencyField::DeficiencyField(const PhysParams& p) : p_(p), root_(principal_eigenvalue(p)) {}

Vec2c DeficiencyField::phi(double theta) const {
  return spin_orbit_eigenfunction(p_, root_.lambda, root_.coefficients.front(), theta);
}

Vec2c DeficiencyField::operator()(int sign, double r, double theta) const {
  if (sign != 1 && sign != -1) throw InvalidParameter("sign must be +1 or -1");
  if (!(r > 0)) throw InvalidParameter("r must be positive");
  const double l = root_.lambda;
  const Vec2c ph = phi(theta);
  const Mat2 er = std::cos(theta) * pauli(1) + std::sin(theta) * pauli(2);
  return bessel_k(l - 0.5, r) * ph + double(sign) * bessel_k(l + 0.5, r) * (er * ph);
}

Vec2c deficiency_element(const PhysParams& p, int sign, double r, double theta) {
  return DeficiencyField(p)(sign, r, theta);
}

}  // namespace brokenline
