#pragma once

#include "brokenline/spin_orbit.hpp"

namespace brokenline {

// Modified Bessel function of the second kind, real order |nu| <= 5, x > 0.
double bessel_k(double nu, double x);

// v+- built on the principal spin-orbit eigenfunction; the root is computed once.
class DeficiencyField {
 public:
  explicit DeficiencyField(const PhysParams& p);
  Vec2c operator()(int sign, double r, double theta) const;
  double lambda() const { return root_.lambda; }
  Vec2c phi(double theta) const;

 private:
  PhysParams p_;
  SpinOrbitRoot root_;
};

Vec2c deficiency_element(const PhysParams& p, int sign, double r, double theta);

}  // namespace brokenline
