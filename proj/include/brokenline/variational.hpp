#pragma once

#include <vector>

#include "brokenline/model.hpp"

namespace brokenline {

// u = sum_n c_n f_n(x) g(y) h(x,y) on the strip x in [L, 2L]; d = L tan(omega).
struct TestFunctionFamily {
  PhysParams params;
  int N = 1;
  double L = 1;
  std::vector<cplx> c;

  double d() const;
  double kappa0() const;
};

TestFunctionFamily make_family(const PhysParams& p, int N, double L, std::vector<cplx> c = {});

struct EnergyBreakdown {
  double jump_sq = 0;
  double l2_sq = 0;
  double gradx_sq = 0;
  double grady_sq = 0;
  double form = 0;       // |grad u|^2 + m^2 |u|^2 + (2m/tau) jump
  double form_gap = 0;   // form - eps^2 |u|^2
  double bound_gap = 0;  // coefficient-independent upper estimate of form_gap
  std::vector<double> mode_form_gap;  // form_gap of each unit mode
};

EnergyBreakdown energy_breakdown(const TestFunctionFamily& f);

// Angle that zeroes the upper estimate at strip length L (negative: no certificate at this L).
double strip_angle(const PhysParams& p, int N, double L);

double critical_angle_closed(double tau, int N);

struct CriticalAngle {
  double omega_star = 0;
  double L_star = 0;
};
CriticalAngle critical_angle_maximize(const PhysParams& p, int N);

struct Certificate {
  bool certified = false;
  double L = 0;
  EnergyBreakdown energy;
};
// Family at the maximizing L with unit coefficients; true iff every mode has negative form_gap.
Certificate bound_state_certificate(const PhysParams& p, int N);

// Smoothstep cutoff: 1 on [0, 1/2], 0 on [1, inf), C^2.
double cutoff(double t);
double cutoff_derivative(double t);

struct WeylEval {
  double residual = 0;  // |(S - lambda) psi_n| / |psi_n|
  double norm_sq = 0;   // |psi_n|^2
};
WeylEval weyl_sequence(const PhysParams& p, double lambda, int n);
double weyl_residual(const PhysParams& p, double lambda, int n);

struct SingularSeqReport {
  double identity_z_err = 0;     // |z(M^2 + 1) + 8 m tau/(4 - tau^2) M|
  double identity_jump_err = 0;  // |(2m/tau)(1 - M)^2 - 8 m tau/(4 - tau^2) M|
  double c = 0;                  // transversal cutoff scale
  double c1 = 0, c2 = 0;         // norm bounds valid for every n >= 1
  std::vector<int> n;
  std::vector<double> norm_sq;
  bool profile_continuous = false;
  bool norms_within_bounds = false;
};
SingularSeqReport singular_seq_identities(const PhysParams& p, const std::vector<int>& n = {2, 4, 8});

}  // namespace brokenline
