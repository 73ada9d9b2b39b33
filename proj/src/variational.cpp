#include "brokenline/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace brokenline {

namespace {

using GL = boost::math::quadrature::gauss<double, 16>;

void require_negative_tau(const PhysParams& p, const char* who) {
  validate(p);
  if (!(p.tau < 0)) throw InvalidParameter(std::string(who) + " needs tau < 0");
}

// Composite Gauss-Legendre over [a, b] split at the given interior points and into cells <= hmax.
template <class F>
double composite(F&& f, double a, double b, std::vector<double> breaks, double hmax) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double sum = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / hmax)));
    for (int k = 0; k < cells; ++k)
      sum += GL::integrate(f, lo + (hi - lo) * k / cells, lo + (hi - lo) * (k + 1) / cells);
  }
  return sum;
}

// 3 + kappa, written without cancellation
double three_plus_kappa(double t) {
  const double t2 = t * t, u = 4 - t2, v = 4 + t2;
  return 2 * (u * u + v * v) / (u * u);
}

}  // namespace

double TestFunctionFamily::d() const { return L * std::tan(params.omega); }
double TestFunctionFamily::kappa0() const { return derived_constants(params).kappa0; }

TestFunctionFamily make_family(const PhysParams& p, int N, double L, std::vector<cplx> c) {
  require_negative_tau(p, "test-function family");
  if (N < 1) throw InvalidParameter("N must be >= 1");
  if (!(L > 0) || !std::isfinite(L)) throw InvalidParameter("L must be positive");
  if (!(p.omega < pi / 2)) throw InvalidParameter("test-function family needs omega < pi/2");
  if (c.empty()) c.assign(N, cplx(1.0));
  if (static_cast<int>(c.size()) != N) throw InvalidParameter("need exactly N coefficients");
  return {p, N, L, std::move(c)};
}

EnergyBreakdown energy_breakdown(const TestFunctionFamily& f) {
  const PhysParams& p = f.params;
  require_negative_tau(p, "energy_breakdown");
  if (!(p.omega < pi / 2)) throw InvalidParameter("energy_breakdown needs omega < pi/2");
  const auto dc = derived_constants(p);
  const double L = f.L, t = p.tau, m = p.m, g = dc.kappa0, kap = dc.kappa_tau;
  const double tw = std::tan(p.omega), cw = std::cos(p.omega);
  const double tpk = three_plus_kappa(t);
  const double strip = L * tw * tpk / 2 + kap / (2 * g);  // transversal weight per unit length
  const double gap_mass = m * m - dc.eps_tau * dc.eps_tau;

  EnergyBreakdown e;
  double csum = 0;
  for (int n = 1; n <= f.N; ++n) {
    const double w = std::norm(f.c[n - 1]);
    const double k2 = std::pow(2 * n * pi, 2);
    csum += w;
    e.gradx_sq += w * k2 / L * strip;
    const double mode = k2 / L * strip + L / 2 * g * kap + gap_mass * L * strip +
                        2 * m / t * dc.c_tau * L / cw;
    e.mode_form_gap.push_back(mode);
  }
  e.jump_sq = dc.c_tau * L / cw * csum;
  e.l2_sq = L * strip * csum;
  e.grady_sq = L / 2 * g * kap * csum;
  e.form = e.gradx_sq + e.grady_sq + m * m * e.l2_sq + 2 * m / t * e.jump_sq;
  e.form_gap = e.form - dc.eps_tau * dc.eps_tau * e.l2_sq;
  const double N2pi2 = double(f.N) * f.N * pi * pi;
  e.bound_gap = csum * (tw * tpk * (2 * N2pi2 + m * m * L * L) + 4 * m * L * t / (4 + t * t) +
                        2 * N2pi2 * kap / (L * g));
  return e;
}

namespace {

struct StripRatio {
  double F, G, H, N2pi2, m;
  StripRatio(double tau, int N, double mass) : N2pi2(double(N) * N * pi * pi), m(mass) {
    const double t2 = tau * tau, u = 4 - t2, v = 4 + t2;
    F = N2pi2 * v * v * (16 * t2 + v * v);
    G = (u * u + v * v) * 4 * std::abs(tau) * v;
    H = 8 * t2 * u * u;
  }
  // tan(omega(L)) = P / Q
  double P(double L) const { return m * m * L * L * H - F; }
  double Q(double L) const { return (2 * N2pi2 + m * m * L * L) * G * m * L; }
  double ratio(double L) const { return P(L) / Q(L); }
  double dsign(double L) const {
    const double dP = 2 * m * m * L * H;
    const double dQ = G * m * (2 * N2pi2 + 3 * m * m * L * L);
    return dP * Q(L) - P(L) * dQ;
  }
};

}  // namespace

double strip_angle(const PhysParams& p, int N, double L) {
  require_negative_tau(p, "strip_angle");
  if (N < 1 || !(L > 0)) throw InvalidParameter("strip_angle needs N >= 1 and L > 0");
  return std::atan(StripRatio(p.tau, N, p.m).ratio(L));
}

double critical_angle_closed(double tau, int N) {
  require_negative_tau({tau, 1.0, pi / 4}, "critical_angle_closed");
  if (N < 1) throw InvalidParameter("N must be >= 1");
  const StripRatio s(tau, N, 1.0);
  const double A = s.N2pi2 * s.H + s.F / 2;
  const double x = A + std::sqrt(A * A + 4 * s.F * A);
  return std::atan(x * std::pow(s.H, 1.5) /
                   (s.G * (2 * s.N2pi2 * s.H + s.F + x) * std::sqrt(s.F + x)));
}

CriticalAngle critical_angle_maximize(const PhysParams& p, int N) {
  require_negative_tau(p, "critical_angle_maximize");
  if (N < 1) throw InvalidParameter("N must be >= 1");
  const StripRatio s(p.tau, N, p.m);
  const double L0 = std::sqrt(s.F / s.H) / p.m;  // omega(L) > 0 only beyond L0

  // bracket the maximum by geometric expansion
  double a = L0, b = 2 * L0, c = 4 * L0;
  int guard = 0;
  while (s.ratio(c) > s.ratio(b)) {
    a = b; b = c; c *= 2;
    if (++guard > 200) {
      std::ostringstream os;
      os << "no bracketed maximum of omega(L): last L=" << c << " ratio=" << s.ratio(c);
      throw ConvergenceFailure(os.str());
    }
  }
  // golden section on tan(omega(L))
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double lo = a, hi = c;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = s.ratio(x1), f2 = s.ratio(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-7 * hi; ++it) {
    if (f1 > f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = s.ratio(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = s.ratio(x2);
    }
  }
  // polish: bisection on the sign of the derivative numerator P'Q - PQ'
  lo = std::max(a, lo - (hi - lo));
  hi = std::min(c, hi + (hi - lo));
  if (!(s.dsign(lo) > 0 && s.dsign(hi) < 0)) {
    std::ostringstream os;
    os << "derivative of omega(L) not bracketed on [" << lo << ", " << hi << "]";
    throw ConvergenceFailure(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (s.dsign(mid) > 0 ? lo : hi) = mid;
  }
  const double L = 0.5 * (lo + hi);
  return {std::atan(s.ratio(L)), L};
}

Certificate bound_state_certificate(const PhysParams& p, int N) {
  require_negative_tau(p, "bound_state_certificate");
  const auto ca = critical_angle_maximize(p, N);
  Certificate cert;
  cert.L = ca.L_star;
  cert.energy = energy_breakdown(make_family(p, N, ca.L_star));
  cert.certified = std::all_of(cert.energy.mode_form_gap.begin(), cert.energy.mode_form_gap.end(),
                               [](double g) { return g < 0; });
  return cert;
}

double cutoff(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1;
  if (t >= 1) return 0;
  const double s = 2 * (t - 0.5);
  return 1 - s * s * s * (10 - 15 * s + 6 * s * s);
}

double cutoff_derivative(double t) {
  const double sg = t < 0 ? -1 : 1;
  t = std::abs(t);
  if (t <= 0.5 || t >= 1) return 0;
  const double s = 2 * (t - 0.5);
  return -sg * 2 * 30 * s * s * (1 - s) * (1 - s);
}

WeylEval weyl_sequence(const PhysParams& p, double lambda, int n) {
  validate(p);
  if (!(std::abs(lambda) > p.m)) throw InvalidParameter("Weyl sequence needs |lambda| > m");
  if (n < 1) throw InvalidParameter("n must be >= 1");
  const double k = std::sqrt(lambda * lambda - p.m * p.m);
  const Vec2 xn(-1.0 - double(n) * n, 0.0);
  // the support disk must stay inside the minus region, away from both rays
  if (xn(0) + n >= 0) throw InvalidParameter("Weyl support intersects the interface");

  const Mat2 V = k * pauli(1) + p.m * pauli(3) + lambda * pauli(0);
  Vec2c w = V.col(0);
  if (w.norm() < 1e-12) w = V.col(1);
  const Mat2 free_minus = k * pauli(1) + p.m * pauli(3) - lambda * pauli(0);  // acts on the plane wave
  constexpr cplx I{0.0, 1.0};

  double res = 0, nrm = 0;
  auto radial = [&](double rho, bool want_res) {
    auto ang = [&](double th) {
      const Vec2 x = xn + rho * Vec2(std::cos(th), std::sin(th));
      const cplx phase = std::exp(I * k * x(0));
      const double chi = cutoff(rho / n), dchi = cutoff_derivative(rho / n) / n;
      if (!want_res) return std::norm(chi / n) * (phase * w).squaredNorm();
      const Mat2 sig_grad = dchi * (std::cos(th) * pauli(1) + std::sin(th) * pauli(2));
      const Vec2c r = (-I * sig_grad * w + chi * (free_minus * w)) * (phase / double(n));
      return r.squaredNorm();
    };
    return rho * composite(ang, 0, 2 * pi, {}, pi / 2);
  };
  nrm = composite([&](double r) { return radial(r, false); }, 0, n, {0.5 * n}, 0.5 * n);
  res = composite([&](double r) { return radial(r, true); }, 0, n, {0.5 * n}, 0.5 * n);
  return {std::sqrt(res / nrm), nrm};
}

double weyl_residual(const PhysParams& p, double lambda, int n) { return weyl_sequence(p, lambda, n).residual; }

SingularSeqReport singular_seq_identities(const PhysParams& p, const std::vector<int>& ns) {
  require_negative_tau(p, "singular_seq_identities");
  const auto dc = derived_constants(p);
  const double t = p.tau, m = p.m, z = dc.kappa0;
  const Mat2 Ml = m_left(p), s0 = pauli(0);
  const double coef = 8 * m * t / (4 - t * t);

  SingularSeqReport rep;
  rep.identity_z_err = (z * (Ml * Ml + s0) + coef * Ml).cwiseAbs().maxCoeff();
  rep.identity_jump_err = ((2 * m / t) * (s0 - Ml) * (s0 - Ml) - coef * Ml).cwiseAbs().maxCoeff();

  // c keeps the support clear of the right ray, which sits at zeta = xi tan(2 omega)
  const double two_w = 2 * p.omega;
  rep.c = two_w < pi / 2 - 1e-12 ? 2 / std::tan(two_w) : 1.0;
  const double K = 1.0;
  const Vec2c a(1.0, 0.0);
  const Vec2c Ma = Ml * a;
  auto v = [&](double zeta) -> Vec2c { return zeta > 0 ? Vec2c(a * std::exp(-z * zeta))
                                                       : Vec2c(Ma * std::exp(z * zeta)); };
  rep.profile_continuous = (v(-0.0) - Ml * v(std::numeric_limits<double>::denorm_min())).norm() == 0;
  auto v2 = [&](double zeta) { return v(zeta).squaredNorm(); };
  const double Ichi = composite([](double x) { return cutoff(x) * cutoff(x); }, -1, 1, {-0.5, 0.5}, 0.5);
  const double tot = (a.squaredNorm() + Ma.squaredNorm()) / (2 * z);
  rep.c2 = Ichi * tot;
  rep.c1 = Ichi * tot * (1 - std::exp(-z / rep.c));  // n = 1 is the smallest core
  rep.norms_within_bounds = true;
  for (int n : ns) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    const double xn = double(n) * n + K, zmax = n / rep.c;
    const double hz = std::min(zmax, 0.5 / z);
    auto inner = [&](double xi) {
      const double cx = cutoff((xi - xn) / n);
      auto f = [&](double zeta) {
        const double cz = cutoff(rep.c * zeta / n);
        return cx * cx * cz * cz * v2(zeta) / n;
      };
      return composite(f, -zmax, zmax, {0.0, -0.5 * zmax, 0.5 * zmax}, hz);
    };
    const double nsq = composite(inner, xn - n, xn + n, {xn - 0.5 * n, xn + 0.5 * n}, 0.5 * n);
    rep.n.push_back(n);
    rep.norm_sq.push_back(nsq);
    if (nsq < rep.c1 * (1 - 1e-12) || nsq > rep.c2 * (1 + 1e-12)) rep.norms_within_bounds = false;
  }
  return rep;
}

}  // namespace brokenline
