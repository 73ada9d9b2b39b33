#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace brokenline {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;
using Vec2 = Eigen::Vector2d;

inline constexpr double pi = 3.14159265358979323846;

// Bad input; the CLI maps this to exit code 2.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iterative solver or root search gave up; exit code 3.
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhysParams {
  double tau = -1.0;
  double m = 1.0;
  double omega = pi / 4;
};

// Throws InvalidParameter. Rejects tau within 1e-9 of -2, 0, 2 and omega outside (1e-6, pi/2].
void validate(const PhysParams& p);
PhysParams make_params(double tau, double m, double omega);

struct DerivedConstants {
  double a, b;
  double eps_tau;    // gap edge
  double kappa0;     // -4 m tau / (4 + tau^2)
  double kappa_tau;  // a^2 + b^2
  double c_tau;      // (a-1)^2 + b^2
};

struct TransmissionMatrix {
  Mat2 entries;
  std::optional<Vec2> normal;
};

Mat2 pauli(int j);

// Outward normals of the plus region on the two rays.
Vec2 normal_left(double omega);   // ray at angle +omega
Vec2 normal_right(double omega);  // ray at angle -omega

// a*s0 + b*i*s3*(s.nu); inverse=true flips the sign of b.
TransmissionMatrix transmission_matrix(const PhysParams& p, const Vec2& nu, bool inverse = false);
Mat2 m_left(const PhysParams& p);
Mat2 m_right(const PhysParams& p);

DerivedConstants derived_constants(const PhysParams& p);

struct SpecialMatrices {
  TransmissionMatrix M_tilde;  // diag(a - b, a + b)
  Mat2 Theta;                  // (s0 + i s.nu)/sqrt2
};
SpecialMatrices special_matrices(const PhysParams& p, const Vec2& nu);

}  // namespace brokenline
