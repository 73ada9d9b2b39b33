#include "brokenline/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace brokenline {

namespace {

using MatXc = Eigen::MatrixXcd;

// B-orthonormalize Y against the B-orthonormal Q, then within itself (SVQB); drops dependent columns.
MatXc orthonormalize(const SpMat& B, const MatXc& Q, MatXc Y) {
  for (int pass = 0; pass < 2; ++pass) {
    if (Q.cols() > 0) Y -= Q * (Q.adjoint() * (B * Y));
    MatXc G = Y.adjoint() * (B * Y);
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatXc> es(G);
    const auto& d = es.eigenvalues();
    const double dmax = d.size() ? d.maxCoeff() : 0.0;
    std::vector<int> keep;
    for (int i = 0; i < d.size(); ++i)
      if (d(i) > 1e-14 * dmax && d(i) > 0) keep.push_back(i);
    MatXc S(Y.cols(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) S.col(j) = es.eigenvectors().col(keep[j]) / std::sqrt(d(keep[j]));
    Y = Y * S;
  }
  return Y;
}

}  // namespace

EigenResult lowest_eigenpairs(const SpMat& A, const SpMat& B, const EigenOptions& opt) {
  const int n = static_cast<int>(A.rows());
  if (opt.k < 1) throw InvalidParameter("k must be >= 1");
  if (n < 1) throw InvalidParameter("empty pencil");
  const int k = std::min(opt.k, n);
  const int p = std::min(n, k + std::max(0, opt.extra));

  EigenResult res;
  // small problems: dense
  if (n <= 400) {
    const MatXc Ad(A), Bd(B);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatXc> ges(Ad, Bd);
    if (ges.info() != Eigen::Success) throw ConvergenceFailure("dense generalized eigensolver failed");
    res.vectors = ges.eigenvectors().leftCols(k);
    for (int i = 0; i < k; ++i) {
      const auto x = res.vectors.col(i);
      res.values.push_back(ges.eigenvalues()(i));
      const VecXc Bx = B * x;
      res.residuals.push_back((A * x - res.values.back() * Bx).norm() / Bx.norm());
    }
    return res;
  }

  SpMat K = A - opt.sigma * B;
  Eigen::SimplicialLLT<SpMat, Eigen::Lower> llt(K);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "factorization of A - sigma B failed at sigma=" << opt.sigma << " (shift not below the spectrum?)";
    throw ConvergenceFailure(os.str());
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  MatXc X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = cplx(nd(rng), nd(rng));
  X = orthonormalize(B, MatXc(n, 0), X);

  for (int it = 0; it < opt.max_restarts; ++it) {
    res.restarts = it + 1;
    MatXc Q = X, Y = X;
    for (int s = 0; s < opt.krylov_steps && Y.cols() > 0; ++s) {
      Y = llt.solve(B * Y);
      res.solves += static_cast<int>(Y.cols());
      Y = orthonormalize(B, Q, Y);
      MatXc next(n, Q.cols() + Y.cols());
      next << Q, Y;
      Q.swap(next);
    }
    MatXc H = Q.adjoint() * (A * Q);
    H = 0.5 * (H + H.adjoint()).eval();
    MatXc G = Q.adjoint() * (B * Q);
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatXc> ges(H, G);
    const int q = std::min<int>(p, Q.cols());
    X = Q * ges.eigenvectors().leftCols(q);

    res.values.assign(k, 0);
    res.residuals.assign(k, 0);
    bool done = q >= k;
    for (int i = 0; i < std::min(k, q); ++i) {
      const VecXc x = X.col(i);
      const VecXc Bx = B * x;
      const double mu = ges.eigenvalues()(i);
      res.values[i] = mu;
      res.residuals[i] = (A * x - mu * Bx).norm() / Bx.norm();
      if (!(res.residuals[i] <= opt.tol)) done = false;
    }
    if (done) {
      res.vectors = X.leftCols(k);
      return res;
    }
  }
  std::ostringstream os;
  os << "eigensolver did not converge in " << opt.max_restarts << " restarts; residuals:";
  for (double r : res.residuals) os << ' ' << r;
  throw ConvergenceFailure(os.str());
}

}  // namespace brokenline
