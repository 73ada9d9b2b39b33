#pragma once

#include <vector>

#include "brokenline/model.hpp"

namespace brokenline {

using Mat4 = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;

// Coefficients (A, B, C, D): phi+ = (A e^{i mu t}, B e^{-i mu t}) on (-w, w),
// phi- = (C e^{i mu t}, D e^{-i mu t}) on (w, 2pi - w), mu = lambda - 1/2.
struct SecularSystem {
  PhysParams params;
  double lambda = 0;
  Mat4 matrix;
};

struct SpinOrbitRoot {
  double lambda = 0;
  int multiplicity = 0;
  std::vector<Vec4c> coefficients;  // unit null vectors of T(lambda)
  double residual = 0;              // max |T v|
};

struct ScanPoint {
  double lambda;
  double det_abs2;
};

struct NoRootFound : ConvergenceFailure {
  NoRootFound(const std::string& what, std::vector<ScanPoint> tr)
      : ConvergenceFailure(what), trace(std::move(tr)) {}
  std::vector<ScanPoint> trace;
};

SecularSystem secular_matrix(const PhysParams& p, double lambda);
cplx secular_determinant(const PhysParams& p, double lambda);

// All roots of det T in [lo, hi], ascending.
std::vector<SpinOrbitRoot> spectrum_in_window(const PhysParams& p, double lo, double hi);

// The unique root in (0, 1/2).
SpinOrbitRoot principal_eigenvalue(const PhysParams& p);

// phi_lambda at angle theta (any real theta, extended 2pi-periodically).
Vec2c spin_orbit_eigenfunction(const PhysParams& p, double lambda, const Vec4c& coeff, double theta);

}  // namespace brokenline
