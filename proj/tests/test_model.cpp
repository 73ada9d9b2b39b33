#include <doctest.h>

#include <random>

#include "brokenline/model.hpp"

using namespace brokenline;

namespace {
constexpr cplx I{0.0, 1.0};

double max_abs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

PhysParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> t(-6, 6), w(0.01, pi / 2);
  for (;;) {
    double tau = t(rng);
    if (std::abs(tau) < 0.05 || std::abs(std::abs(tau) - 2) < 0.05) continue;
    return make_params(tau, 1.0, w(rng));
  }
}
}  // namespace

TEST_CASE("pauli algebra") {
  Mat2 d;
  d << 1, 0, 0, -1;
  CHECK(max_abs(pauli(3) - d) == 0);
  CHECK(max_abs(pauli(0) - Mat2::Identity()) == 0);
  CHECK(max_abs(pauli(1) * pauli(2) + pauli(2) * pauli(1)) == 0);
  CHECK(max_abs(pauli(1) * pauli(2) - I * pauli(3)) == 0);
  CHECK_THROWS_AS(pauli(4), InvalidParameter);
  CHECK_THROWS_AS(pauli(-1), InvalidParameter);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(make_params(2, 1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(make_params(-2 + 1e-10, 1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(make_params(0, 1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(make_params(-1, 0, 0.5), InvalidParameter);
  CHECK_THROWS_AS(make_params(-1, 1, 0), InvalidParameter);
  CHECK_THROWS_AS(make_params(-1, 1, 2), InvalidParameter);
  CHECK_NOTHROW(make_params(-1, 1, pi / 2));
}

TEST_CASE("M_l for tau = -1") {
  const double w = 0.3;
  auto p = make_params(-1, 1, w);
  Mat2 want;
  want << 5.0 / 3, -4.0 / 3 * std::exp(-I * w), -4.0 / 3 * std::exp(I * w), 5.0 / 3;
  CHECK(max_abs(m_left(p) - want) < 1e-15);
  auto t = transmission_matrix(p, normal_left(w));
  REQUIRE(t.normal);
  CHECK((*t.normal - normal_left(w)).norm() == 0);
  CHECK_THROWS_AS(transmission_matrix(p, Vec2(1, 1)), InvalidParameter);
}

TEST_CASE("transmission matrix identities") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  for (int i = 0; i < 100; ++i) {
    auto p = random_params(rng);
    const double t = ang(rng);
    Vec2 nu(std::cos(t), std::sin(t));
    Mat2 M = transmission_matrix(p, nu).entries;
    Mat2 Mi = transmission_matrix(p, nu, true).entries;
    const double s = std::max(1.0, max_abs(M));
    CHECK(std::abs(M.determinant() - 1.0) < 1e-14 * s * s);
    CHECK(max_abs(M - M.adjoint()) < 1e-14 * s);
    CHECK(max_abs(M * Mi - Mat2::Identity()) < 1e-14 * s * s);
    CHECK(max_abs(pauli(3) * M * pauli(3) - Mi) < 1e-14 * s);
    Mat2 K = I * pauli(3) * (nu(0) * pauli(1) + nu(1) * pauli(2));
    CHECK(max_abs(K * K - Mat2::Identity()) < 1e-14);
  }
}

TEST_CASE("derived constants") {
  auto d = derived_constants(make_params(-1, 1, 0.5));
  CHECK(d.a == doctest::Approx(5.0 / 3).epsilon(1e-15));
  CHECK(d.b == doctest::Approx(-4.0 / 3).epsilon(1e-15));
  CHECK(d.eps_tau == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(d.kappa0 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(d.kappa_tau == doctest::Approx(41.0 / 9).epsilon(1e-15));
  CHECK(d.c_tau == doctest::Approx(20.0 / 9).epsilon(1e-15));

  CHECK(derived_constants(make_params(1.5, 2, 0.5)).eps_tau == 2);
  CHECK(derived_constants(make_params(-1e-6, 1, 0.5)).eps_tau == doctest::Approx(1).epsilon(1e-11));

  for (double tau : {-0.3, -1.0, -1.9, -2.1, -5.0, -40.0})
    for (double m : {0.5, 1.0, 3.0}) {
      auto c = derived_constants(make_params(tau, m, 0.5));
      CHECK(std::abs(c.a * c.a - c.b * c.b - 1) < 1e-14 * c.a * c.a);
      CHECK(std::abs(m * m - c.kappa0 * c.kappa0 - c.eps_tau * c.eps_tau) < 1e-14 * m * m);
      CHECK(c.eps_tau < m);
      const double t2 = tau * tau;
      CHECK(c.c_tau == doctest::Approx(4 * t2 * (t2 + 4) / ((t2 - 4) * (t2 - 4))).epsilon(1e-13));
      CHECK(c.kappa_tau ==
            doctest::Approx(((4 + t2) * (4 + t2) + 16 * t2) / ((4 - t2) * (4 - t2))).epsilon(1e-13));
    }
}

TEST_CASE("Theta and M tilde") {
  auto p = make_params(-1, 1, 0.4);
  Mat2 want = Mat2::Zero();
  want(0, 0) = 3;
  want(1, 1) = 1.0 / 3;
  CHECK(max_abs(special_matrices(p, normal_left(0.4)).M_tilde.entries - want) < 1e-15);
  CHECK_FALSE(special_matrices(p, normal_left(0.4)).M_tilde.normal);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  for (int i = 0; i < 20; ++i) {
    auto q = random_params(rng);
    const double t = ang(rng);
    Vec2 nu(std::cos(t), std::sin(t));
    auto s = special_matrices(q, nu);
    Mat2 M = transmission_matrix(q, nu).entries;
    CHECK(max_abs(s.Theta * s.Theta.adjoint() - Mat2::Identity()) < 1e-14);
    CHECK(max_abs(s.Theta.adjoint() * M * s.Theta - s.M_tilde.entries) < 1e-14 * max_abs(M));
  }
}

TEST_CASE("interface identities") {
  for (double tau : {-0.5, -1.0, -3.0})
    for (double w : {0.1, 0.7}) {
      auto p = make_params(tau, 1.3, w);
      auto d = derived_constants(p);
      const double k = 8 * p.m * tau / (4 - tau * tau);
      for (const Mat2& M : {m_left(p), m_right(p), special_matrices(p, normal_left(w)).M_tilde.entries}) {
        const Mat2 one = Mat2::Identity();
        const double s = std::max(1.0, std::abs(k) * max_abs(M * M));
        CHECK(max_abs(d.kappa0 * (M * M + one) + k * M) < 1e-14 * s);
        CHECK(max_abs((2 * p.m / tau) * (one - M) * (one - M) - k * M) < 1e-14 * s);
      }
    }
}
