#pragma once

#include <vector>

#include "brokenline/assembly.hpp"

namespace brokenline {

struct EigenOptions {
  int k = 6;
  double sigma = 0;        // shift, must lie below the spectrum (A - sigma B positive definite)
  double tol = 1e-9;       // target relative residual |Ax - mu Bx| / |Bx|
  int extra = 4;           // guard vectors beyond k
  int krylov_steps = 3;    // shift-invert applications per restart
  int max_restarts = 300;
  unsigned seed = 20240611;
};

struct EigenResult {
  std::vector<double> values;      // ascending
  std::vector<double> residuals;
  Eigen::MatrixXcd vectors;        // B-orthonormal columns
  int restarts = 0;
  int solves = 0;
};

// Lowest eigenpairs of A x = mu B x by restarted block shift-invert Krylov iteration
// with Rayleigh-Ritz. Throws ConvergenceFailure with the achieved residuals.
EigenResult lowest_eigenpairs(const SpMat& A, const SpMat& B, const EigenOptions& opt);

}  // namespace brokenline
