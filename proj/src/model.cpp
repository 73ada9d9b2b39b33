#include "brokenline/model.hpp"

#include <cmath>
#include <sstream>

namespace brokenline {

namespace {
constexpr cplx I{0.0, 1.0};

Mat2 sigma_dot(const Vec2& nu) { return nu(0) * pauli(1) + nu(1) * pauli(2); }
}  // namespace

void validate(const PhysParams& p) {
  auto fail = [](const std::string& what) { throw InvalidParameter(what); };
  if (!std::isfinite(p.tau) || !std::isfinite(p.m) || !std::isfinite(p.omega))
    fail("parameters must be finite");
  for (double bad : {-2.0, 0.0, 2.0})
    if (std::abs(p.tau - bad) < 1e-9) {
      std::ostringstream os;
      os << "tau=" << p.tau << " is excluded (within 1e-9 of " << bad << ")";
      fail(os.str());
    }
  if (!(p.m > 0)) fail("m must be positive");
  if (!(p.omega > 1e-6) || p.omega > pi / 2 + 1e-15) fail("omega must lie in (1e-6, pi/2]");
}

PhysParams make_params(double tau, double m, double omega) {
  PhysParams p{tau, m, omega};
  validate(p);
  return p;
}

Mat2 pauli(int j) {
  Mat2 s;
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw InvalidParameter("pauli index must be 0..3, got " + std::to_string(j));
  }
  return s;
}

Vec2 normal_left(double omega) { return {-std::sin(omega), std::cos(omega)}; }
Vec2 normal_right(double omega) { return {-std::sin(omega), -std::cos(omega)}; }

DerivedConstants derived_constants(const PhysParams& p) {
  validate(p);
  const double t = p.tau, t2 = t * t;
  DerivedConstants d{};
  d.a = (4 + t2) / (4 - t2);
  d.b = 4 * t / (4 - t2);
  d.eps_tau = t > 0 ? p.m : p.m * std::abs(t2 - 4) / (t2 + 4);
  d.kappa0 = -4 * p.m * t / (4 + t2);
  d.kappa_tau = d.a * d.a + d.b * d.b;
  d.c_tau = (d.a - 1) * (d.a - 1) + d.b * d.b;
  return d;
}

TransmissionMatrix transmission_matrix(const PhysParams& p, const Vec2& nu, bool inverse) {
  if (std::abs(nu.norm() - 1) > 1e-12) throw InvalidParameter("normal must be a unit vector");
  const auto d = derived_constants(p);
  const double b = inverse ? -d.b : d.b;
  TransmissionMatrix t;
  t.entries = d.a * pauli(0) + b * I * pauli(3) * sigma_dot(nu);
  t.normal = nu;
  return t;
}

Mat2 m_left(const PhysParams& p) { return transmission_matrix(p, normal_left(p.omega)).entries; }
Mat2 m_right(const PhysParams& p) { return transmission_matrix(p, normal_right(p.omega)).entries; }

SpecialMatrices special_matrices(const PhysParams& p, const Vec2& nu) {
  if (std::abs(nu.norm() - 1) > 1e-12) throw InvalidParameter("normal must be a unit vector");
  const auto d = derived_constants(p);
  SpecialMatrices s;
  s.M_tilde.entries = d.a * pauli(0) - d.b * pauli(3);
  s.Theta = (pauli(0) + I * sigma_dot(nu)) / std::sqrt(2.0);
  return s;
}

}  // namespace brokenline
