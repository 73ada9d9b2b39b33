#pragma once

#include "brokenline/model.hpp"

namespace brokenline {

struct Aux1DResult {
  double gamma = 0;
  double k_gamma = 0;
  double E_gamma = 0;  // m^2 - k^2
  double deficit = 0;  // eps_tau^2 - E_gamma, free of cancellation for large gamma
};

// k tanh(k gamma)
double secular_f(double k, double gamma);

// Ground state of the transversal interface problem on (-gamma, gamma); needs tau < 0.
Aux1DResult ground_state(const PhysParams& p, double gamma);

}  // namespace brokenline
