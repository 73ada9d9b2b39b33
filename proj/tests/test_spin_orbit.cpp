#include <doctest.h>

#include <random>

#include "brokenline/spin_orbit.hpp"
#include "oracles.hpp"

using namespace brokenline;

TEST_CASE("det T away from zero at lambda = 1/2") {
  auto p = make_params(-1, 1, pi / 4);
  CHECK(std::abs(secular_determinant(p, 0.5)) > 1e-3);
  // weak coupling: periodic gluing, roots only at 1/2 + Z
  auto q = make_params(-1e-8, 1, pi / 4);
  CHECK(std::abs(secular_determinant(q, 0.25)) > 1e-3);
  CHECK(std::abs(secular_determinant(q, 1.5)) < 1e-6);
}

TEST_CASE("|det T| even in lambda") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> lam(-3, 3);
  for (double tau : {-1.0, 1.0, -3.0})
    for (int i = 0; i < 50; ++i) {
      auto p = make_params(tau, 1, 0.6);
      const double l = lam(rng);
      const double a = std::abs(secular_determinant(p, l)), b = std::abs(secular_determinant(p, -l));
      CHECK(a == doctest::Approx(b).epsilon(1e-10).scale(1e-12));
    }
}

TEST_CASE("det T real on the real axis") {
  auto p = make_params(-1.3, 1, 0.5);
  for (double l : {-2.1, -0.3, 0.2, 1.7}) CHECK(std::abs(secular_determinant(p, l).imag()) < 1e-12);
}

TEST_CASE("principal eigenvalue against the Galerkin oracle") {
  for (double tau : {-1.0, 1.0}) {
    auto p = make_params(tau, 1, pi / 4);
    auto r = principal_eigenvalue(p);
    CHECK(r.lambda > 0);
    CHECK(r.lambda < 0.5);
    CHECK(r.multiplicity == 1);
    CHECK(r.residual <= 1e-9);
    auto o40 = oracle::spin_orbit_galerkin(p, 40, 1e-6, 0.5 - 1e-6);
    auto o60 = oracle::spin_orbit_galerkin(p, 60, 1e-6, 0.5 - 1e-6);
    REQUIRE(o40.size() == 1);
    REQUIRE(o60.size() == 1);
    CHECK(std::abs(o40[0] - o60[0]) < 1e-8);
    CHECK(std::abs(r.lambda - o60[0]) < 1e-8);
  }
  auto weak = principal_eigenvalue(make_params(-1e-6, 1, pi / 4));
  CHECK(std::abs(weak.lambda - 0.5) < 1e-3);
  CHECK(weak.lambda < 0.5);
}

TEST_CASE("window spectrum") {
  auto p = make_params(-1, 1, pi / 4);
  auto roots = spectrum_in_window(p, -1, 1);
  REQUIRE(roots.size() % 2 == 0);
  REQUIRE(!roots.empty());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& r = roots[i];
    const auto& s = roots[roots.size() - 1 - i];
    CHECK(std::abs(r.lambda + s.lambda) < 1e-8);
    CHECK(r.multiplicity == s.multiplicity);
    CHECK(std::abs(r.lambda) > 1e-6);
    CHECK(std::abs(std::abs(r.lambda) - 0.5) > 1e-6);
    CHECK(r.residual <= 1e-9);
    if (i) CHECK(roots[i - 1].lambda < r.lambda);
    for (const auto& v : r.coefficients) {
      CHECK(std::abs(v.norm() - 1) < 1e-12);
      CHECK((secular_matrix(p, r.lambda).matrix * v).norm() <= 1e-9);
    }
  }
  CHECK_THROWS_AS(spectrum_in_window(p, 1, -1), InvalidParameter);
}

TEST_CASE("exactly one root in (0, 1/2)") {
  for (double tau : {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0})
    for (double w : {pi / 8, pi / 4, 3 * pi / 8}) {
      auto p = make_params(tau, 1, w);
      auto roots = spectrum_in_window(p, 1e-9, 0.5 - 1e-9);
      CHECK(roots.size() == 1);
    }
}

TEST_CASE("eigenfunction satisfies the matching conditions") {
  auto p = make_params(-1, 1, 0.5);
  auto r = principal_eigenvalue(p);
  const auto& c = r.coefficients.at(0);
  const double w = p.omega, e = 1e-12;
  Vec2c inside_l = spin_orbit_eigenfunction(p, r.lambda, c, w - e);
  Vec2c outside_l = spin_orbit_eigenfunction(p, r.lambda, c, w + e);
  CHECK((outside_l - m_left(p) * inside_l).norm() < 1e-9);
  Vec2c inside_r = spin_orbit_eigenfunction(p, r.lambda, c, -w + e);
  Vec2c outside_r = spin_orbit_eigenfunction(p, r.lambda, c, 2 * pi - w - e);
  CHECK((outside_r - m_right(p) * inside_r).norm() < 1e-9);
  // periodic extension
  CHECK((spin_orbit_eigenfunction(p, r.lambda, c, 1.0) - spin_orbit_eigenfunction(p, r.lambda, c, 1.0 + 2 * pi)).norm() <
        1e-12);
}

TEST_CASE("omega = pi/2 rejected") {
  CHECK_THROWS_AS(principal_eigenvalue(make_params(-1, 1, pi / 2)), InvalidParameter);
}
