#include "brokenline/spin_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace brokenline {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr int kGridPerUnit = 2000;

Mat2 E(double mu, double theta) {
  Mat2 e = Mat2::Zero();
  e(0, 0) = std::exp(I * mu * theta);
  e(1, 1) = std::exp(-I * mu * theta);
  return e;
}

// d/dlambda of E(mu, theta)
Mat2 dE(double mu, double theta) {
  Mat2 e = Mat2::Zero();
  e(0, 0) = I * theta * std::exp(I * mu * theta);
  e(1, 1) = -I * theta * std::exp(-I * mu * theta);
  return e;
}

struct Builder {
  PhysParams p;
  Mat2 Ml, Mr;
  explicit Builder(const PhysParams& q) : p(q), Ml(m_left(q)), Mr(m_right(q)) {}

  Mat4 T(double lambda) const {
    const double mu = lambda - 0.5, w = p.omega;
    Mat4 t;
    t.block<2, 2>(0, 0) = Ml * E(mu, w);
    t.block<2, 2>(0, 2) = -E(mu, w);
    t.block<2, 2>(2, 0) = Mr * E(mu, -w);
    t.block<2, 2>(2, 2) = -E(mu, 2 * pi - w);
    return t;
  }
  Mat4 dT(double lambda) const {
    const double mu = lambda - 0.5, w = p.omega;
    Mat4 t;
    t.block<2, 2>(0, 0) = Ml * dE(mu, w);
    t.block<2, 2>(0, 2) = -dE(mu, w);
    t.block<2, 2>(2, 0) = Mr * dE(mu, -w);
    t.block<2, 2>(2, 2) = -dE(mu, 2 * pi - w);
    return t;
  }
  cplx det(double lambda) const { return T(lambda).determinant(); }
  double f(double lambda) const { return std::norm(det(lambda)); }

  // Newton on det T via Jacobi's formula, kept inside [lo, hi].
  double newton(double x, double lo, double hi) const {
    for (int it = 0; it < 100; ++it) {
      const Mat4 t = T(x);
      const cplx tr = t.partialPivLu().solve(dT(x)).trace();
      if (!std::isfinite(tr.real()) || std::abs(tr) == 0) break;
      const double step = (1.0 / tr).real();
      const double nx = x - step;
      if (nx < lo || nx > hi) break;
      x = nx;
      if (std::abs(step) <= 1e-10) break;
    }
    return x;
  }
};

double golden_min(const Builder& b, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = b.f(x1), f2 = b.f(x2);
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - g * (hi - lo); f1 = b.f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + g * (hi - lo); f2 = b.f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

SpinOrbitRoot classify(const Builder& b, double lambda) {
  const Mat4 t = b.T(lambda);
  Eigen::JacobiSVD<Mat4> svd(t, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  SpinOrbitRoot r;
  r.lambda = lambda;
  for (int i = 3; i >= 0; --i) {
    if (s(i) >= 1e-7 * s(0)) break;
    r.coefficients.push_back(svd.matrixV().col(i));
  }
  r.multiplicity = static_cast<int>(r.coefficients.size());
  for (const auto& v : r.coefficients) r.residual = std::max(r.residual, (t * v).norm());
  return r;
}

}  // namespace

SecularSystem secular_matrix(const PhysParams& p, double lambda) {
  validate(p);
  return {p, lambda, Builder(p).T(lambda)};
}

cplx secular_determinant(const PhysParams& p, double lambda) {
  validate(p);
  return Builder(p).det(lambda);
}

std::vector<SpinOrbitRoot> spectrum_in_window(const PhysParams& p, double lo, double hi) {
  validate(p);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidParameter("spectrum window needs finite lo < hi");
  if (p.omega >= pi / 2) throw InvalidParameter("spin-orbit problem needs omega < pi/2");
  const Builder b(p);
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) * kGridPerUnit)));
  std::vector<double> x(n + 1), g(n + 1), f(n + 1);
  for (int i = 0; i <= n; ++i) {
    x[i] = i == n ? hi : lo + (hi - lo) * i / n;
    const cplx d = b.det(x[i]);
    // det T is real on the real axis up to roundoff (the reduced monodromy lies in SU(1,1))
    g[i] = d.real();
    f[i] = std::norm(d);
  }

  std::vector<double> found;
  std::vector<char> covered(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    if (g[i] == 0 || g[i] * g[i + 1] < 0) {
      double a = x[i], c = x[i + 1];
      if (g[i] != 0) {
        auto fn = [&](double l) { return b.det(l).real(); };
        boost::uintmax_t iters = 200;
        auto br = boost::math::tools::toms748_solve(fn, a, c, g[i], g[i + 1],
                                                    boost::math::tools::eps_tolerance<double>(45), iters);
        a = br.first, c = br.second;
      }
      found.push_back(b.newton(0.5 * (a + c), x[i], x[i + 1]));
      covered[i] = covered[i + 1] = 1;
    }
  }
  // tangential zeros (even multiplicity) show up only as minima of |det|^2
  for (int i = 0; i <= n; ++i) {
    if (covered[i]) continue;
    const bool left_ok = i == 0 || f[i] <= f[i - 1];
    const bool right_ok = i == n || f[i] <= f[i + 1];
    if (!left_ok || !right_ok) continue;
    const double a = x[std::max(i - 1, 0)], c = x[std::min(i + 1, n)];
    const double xm = b.newton(golden_min(b, a, c), a, c);
    if (classify(b, xm).multiplicity > 0) found.push_back(xm);
  }

  std::sort(found.begin(), found.end());
  std::vector<SpinOrbitRoot> roots;
  for (double l : found) {
    if (l < lo || l > hi) continue;
    if (!roots.empty() && std::abs(roots.back().lambda - l) < 1e-8) continue;
    auto r = classify(b, l);
    if (r.multiplicity == 0) continue;
    roots.push_back(std::move(r));
  }
  return roots;
}

SpinOrbitRoot principal_eigenvalue(const PhysParams& p) {
  const double delta = 1e-9;
  auto roots = spectrum_in_window(p, delta, 0.5 - delta);
  if (roots.size() == 1 && roots[0].multiplicity == 1) return roots[0];
  std::vector<ScanPoint> trace;
  const Builder b(p);
  for (int i = 0; i <= 50; ++i) {
    const double l = delta + (0.5 - 2 * delta) * i / 50;
    trace.push_back({l, b.f(l)});
  }
  std::ostringstream os;
  os << "expected one simple secular root in (0, 1/2) for tau=" << p.tau << ", omega=" << p.omega
     << ", found " << roots.size();
  throw NoRootFound(os.str(), std::move(trace));
}

Vec2c spin_orbit_eigenfunction(const PhysParams& p, double lambda, const Vec4c& coeff, double theta) {
  const double w = p.omega, mu = lambda - 0.5;
  double t = std::fmod(theta + w, 2 * pi);
  if (t < 0) t += 2 * pi;
  t -= w;  // now in [-w, 2pi - w)
  const bool plus = t <= w;
  Vec2c v;
  v(0) = (plus ? coeff(0) : coeff(2)) * std::exp(I * mu * t);
  v(1) = (plus ? coeff(1) : coeff(3)) * std::exp(-I * mu * t);
  return v;
}

}  // namespace brokenline
