#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "brokenline/special.hpp"

using namespace brokenline;

TEST_CASE("closed forms and reference values") {
  CHECK(bessel_k(0.5, 2) == doctest::Approx(std::sqrt(pi / 4) * std::exp(-2.0)).epsilon(1e-12));
  CHECK(bessel_k(0, 1) == doctest::Approx(0.42102443824070834).epsilon(1e-12));
  CHECK(bessel_k(-0.3, 1.7) == bessel_k(0.3, 1.7));
  for (double nu : {0.0, 0.2, 1.0, 2.5, 4.9})
    for (double x : {1e-3, 0.05, 0.7, 3.0, 25.0})
      CHECK(bessel_k(nu, x) == doctest::Approx(std::cyl_bessel_k(nu, x)).epsilon(1e-10));
}

TEST_CASE("recurrence on a 10 x 10 grid") {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double nu = -3.9 + 7.8 * i / 9, x = 0.05 * std::pow(400.0, j / 9.0);
      const double kp = bessel_k(nu + 1, x), km = bessel_k(nu - 1, x), k = bessel_k(nu, x);
      const double scale = std::max({kp, km, std::abs(2 * nu / x) * k});
      CHECK(std::abs(kp - km - 2 * nu / x * k) <= 1e-9 * scale);
    }
}

TEST_CASE("positive, decreasing, log-convex") {
  for (double nu : {0.0, 0.14, 0.86, 3.0}) {
    const double h = 0.05;
    double prev = INFINITY;
    for (int i = 1; i < 200; ++i) {
      const double x = 0.02 + i * h;
      const double k = bessel_k(nu, x);
      CHECK(k > 0);
      CHECK(k < prev);
      prev = k;
      const double d2 = std::log(bessel_k(nu, x + h)) - 2 * std::log(k) + std::log(bessel_k(nu, x - h));
      CHECK(d2 >= -1e-8);
    }
  }
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(bessel_k(0.5, 0), InvalidParameter);
  CHECK_THROWS_AS(bessel_k(0.5, -1), InvalidParameter);
  CHECK_THROWS_AS(bessel_k(5.5, 1), InvalidParameter);
}

TEST_CASE("deficiency elements") {
  auto p = make_params(-1, 1, pi / 4);
  DeficiencyField v(p);
  const double l = v.lambda();

  SUBCASE("sum cancels the radial term") {
    for (double r : {0.01, 0.5, 4.0})
      for (double t : {0.1, 1.0, 3.0, 5.9}) {
        Vec2c s = v(1, r, t) + v(-1, r, t);
        CHECK((s - 2 * bessel_k(l - 0.5, r) * v.phi(t)).norm() <= 1e-12 * s.norm());
      }
  }

  SUBCASE("jump across the rays follows the transmission matrices") {
    const double e = 1e-11;
    for (int sign : {1, -1})
      for (double r : {0.1, 1.0}) {
        const double w = p.omega;
        Vec2c in = v(sign, r, w - e), out = v(sign, r, w + e);
        CHECK((out - m_left(p) * in).norm() <= 1e-8 * out.norm());
        in = v(sign, r, 2 * pi - w + e);
        out = v(sign, r, 2 * pi - w - e);
        CHECK((out - m_right(p) * in).norm() <= 1e-8 * out.norm());
      }
  }

  SUBCASE("small r growth") {
    const double na = 0.5 - l, nb = 0.5 + l;
    for (double r : {1e-4, 1e-3, 1e-2})
      for (double t : {0.3, 2.0, 4.5}) {
        const double ph = v.phi(t).norm();
        // the K_{lambda+1/2} term dominates |v|
        const double lead = 0.5 * std::tgamma(nb) * std::pow(2 / r, nb) * ph;
        for (int sign : {1, -1}) {
          const double ratio = v(sign, r, t).norm() / lead;
          CHECK(ratio > 1 / 1.5);
          CHECK(ratio < 1.5);
        }
        // the radial-free part grows like r^(lambda - 1/2)
        const double even = 0.5 * (v(1, r, t) + v(-1, r, t)).norm();
        const double ratio = even / (0.5 * std::tgamma(na) * std::pow(2 / r, na) * ph);
        CHECK(ratio > 1 / 1.5);
        CHECK(ratio < 1.5);
      }
  }

  SUBCASE("square integrable") {
    // |v|^2 = (Ka^2 + Kb^2)|phi|^2 + 2 sign Ka Kb Re(phi* e_r.sigma phi); integrate in log r
    boost::math::quadrature::gauss<double, 20> g;
    auto angular = [&](auto f) {
      double s = 0;
      const double w = p.omega, cuts[] = {-w, w, 2 * pi - w};
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 8; ++j) {
          const double a = cuts[k] + (cuts[k + 1] - cuts[k]) * j / 8, b = cuts[k] + (cuts[k + 1] - cuts[k]) * (j + 1) / 8;
          s += g.integrate(f, a, b);
        }
      return s;
    };
    const double A = angular([&](double t) { return v.phi(t).squaredNorm(); });
    const double C = angular([&](double t) {
      Vec2c ph = v.phi(t);
      Mat2 er = std::cos(t) * pauli(1) + std::sin(t) * pauli(2);
      return (ph.adjoint() * er * ph)(0).real();
    });
    auto radial = [&](int panels, int sign) {
      const double s0 = std::log(1e-3), s1 = std::log(30.0);
      double s = 0;
      for (int j = 0; j < panels; ++j) {
        const double a = s0 + (s1 - s0) * j / panels, b = s0 + (s1 - s0) * (j + 1) / panels;
        s += g.integrate(
            [&](double u) {
              const double r = std::exp(u), ka = bessel_k(l - 0.5, r), kb = bessel_k(l + 0.5, r);
              return r * r * ((ka * ka + kb * kb) * A + 2 * sign * ka * kb * C);
            },
            a, b);
      }
      return s;
    };
    for (int sign : {1, -1}) {
      const double n1 = radial(8, sign), n2 = radial(16, sign);
      CHECK(std::isfinite(n1));
      CHECK(n1 > 0);
      CHECK(std::abs(n1 - n2) <= 1e-8 * n2);
    }
  }
}
