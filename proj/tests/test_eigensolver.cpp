#include <doctest.h>

#include <random>

#include "brokenline/eigensolver.hpp"

using namespace brokenline;

namespace {
// 1-D P1 pencil for -u'' on (0, 1) with Dirichlet ends, twisted by random phases (unitarily equivalent)
std::pair<SpMat, SpMat> twisted_laplacian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ph(0, 2 * pi);
  std::vector<cplx> u(n);
  for (auto& z : u) z = std::polar(1.0, ph(rng));
  const double h = 1.0 / (n + 1);
  std::vector<Eigen::Triplet<cplx>> ta, tb;
  for (int i = 0; i < n; ++i) {
    ta.emplace_back(i, i, 2 / h);
    tb.emplace_back(i, i, 4 * h / 6);
    if (i + 1 < n) {
      const cplx c = std::conj(u[i]) * u[i + 1];
      ta.emplace_back(i, i + 1, -c / h);
      ta.emplace_back(i + 1, i, -std::conj(c) / h);
      tb.emplace_back(i, i + 1, c * (h / 6));
      tb.emplace_back(i + 1, i, std::conj(c) * (h / 6));
    }
  }
  SpMat A(n, n), B(n, n);
  A.setFromTriplets(ta.begin(), ta.end());
  B.setFromTriplets(tb.begin(), tb.end());
  return {A, B};
}

// exact P1 eigenvalues of the uniform 1-D pencil
double p1_eigenvalue(int j, int n) {
  const double h = 1.0 / (n + 1), c = std::cos(j * pi * h);
  return 6 / (h * h) * (1 - c) / (2 + c);
}
}  // namespace

TEST_CASE("sparse path matches the exact discrete spectrum") {
  const int n = 600;
  auto [A, B] = twisted_laplacian(n, 9);
  EigenOptions eo;
  eo.k = 6;
  eo.sigma = -1;
  auto r = lowest_eigenpairs(A, B, eo);
  REQUIRE(r.values.size() == 6);
  for (int j = 0; j < 6; ++j) {
    CHECK(r.values[j] == doctest::Approx(p1_eigenvalue(j + 1, n)).epsilon(1e-10));
    CHECK(r.residuals[j] <= 1e-8);
  }
  // B-orthonormal vectors
  Eigen::MatrixXcd G = r.vectors.adjoint() * (B * r.vectors);
  CHECK((G - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-10);
  CHECK(r.solves > 0);
}

TEST_CASE("dense path for small pencils") {
  const int n = 100;
  auto [A, B] = twisted_laplacian(n, 4);
  EigenOptions eo;
  eo.k = 3;
  auto r = lowest_eigenpairs(A, B, eo);
  for (int j = 0; j < 3; ++j) CHECK(r.values[j] == doctest::Approx(p1_eigenvalue(j + 1, n)).epsilon(1e-11));
}

TEST_CASE("deterministic") {
  auto [A, B] = twisted_laplacian(800, 1);
  EigenOptions eo;
  auto r1 = lowest_eigenpairs(A, B, eo);
  auto r2 = lowest_eigenpairs(A, B, eo);
  CHECK(r1.values == r2.values);
}

TEST_CASE("failures are reported") {
  auto [A, B] = twisted_laplacian(600, 2);
  EigenOptions eo;
  eo.sigma = 1e6;  // above the bottom: A - sigma B indefinite
  CHECK_THROWS_AS(lowest_eigenpairs(A, B, eo), ConvergenceFailure);
  eo.sigma = -1;
  eo.k = 0;
  CHECK_THROWS_AS(lowest_eigenpairs(A, B, eo), InvalidParameter);
  eo.k = 4;
  eo.max_restarts = 1;
  eo.krylov_steps = 1;
  eo.tol = 1e-15;
  CHECK_THROWS_AS(lowest_eigenpairs(A, B, eo), ConvergenceFailure);
}
