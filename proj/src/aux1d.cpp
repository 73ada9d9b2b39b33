#include "brokenline/aux1d.hpp"

#include <cmath>
#include <sstream>

namespace brokenline {

double secular_f(double k, double gamma) { return k * std::tanh(k * gamma); }

Aux1DResult ground_state(const PhysParams& p, double gamma) {
  validate(p);
  if (!(p.tau < 0)) throw InvalidParameter("ground_state needs tau < 0");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InvalidParameter("gamma must be positive");
  const double k0 = derived_constants(p).kappa0;

  double lo = k0, hi = k0 + 10 * p.m + 10 / gamma;
  for (int i = 0; secular_f(hi, gamma) <= k0; ++i) {
    if (i > 60) {
      std::ostringstream os;
      os << "no bracket for k tanh(k gamma) = " << k0 << " on [" << lo << ", " << hi << "]";
      throw ConvergenceFailure(os.str());
    }
    lo = hi;
    hi *= 2;
  }
  if (secular_f(lo, gamma) > k0) {
    std::ostringstream os;
    os << "bracket failure: F(" << lo << ") already exceeds kappa0=" << k0;
    throw ConvergenceFailure(os.str());
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (secular_f(mid, gamma) < k0 ? lo : hi) = mid;
  }
  double k = 0.5 * (lo + hi);
  const double th = std::tanh(k * gamma);
  const double df = th + k * gamma * (1 - th * th);
  k -= (secular_f(k, gamma) - k0) / df;

  // k - kappa0 = k (1 - tanh(k gamma)) keeps its digits after E has converged to eps^2
  const double dk = 2 * k / (std::exp(2 * k * gamma) + 1);
  return {gamma, k, p.m * p.m - k * k, dk * (k + k0)};
}

}  // namespace brokenline
