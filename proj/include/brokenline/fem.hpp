#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "brokenline/eigensolver.hpp"

namespace brokenline {

struct SpectralReport {
  std::vector<double> eigenvalues;  // lowest Ritz values, ascending
  std::vector<double> residuals;
  double gap_edge = 0;   // eps_tau^2
  double margin = 0;
  int count_below = 0;   // Ritz values < gap_edge - margin
  double coarse_lowest = std::numeric_limits<double>::quiet_NaN();  // lowest Ritz value on the 2h mesh
  double sigma = 0;
  int restarts = 0;
  // mesh metadata
  std::string mesh_kind, bc;
  int vertices = 0, triangles = 0, full_dofs = 0, reduced_dofs = 0;
  MeshOptions mesh_options;
};

// Lowest k Ritz values of the pencil; the shift is lowered automatically if the factorization fails.
SpectralReport solve_lowest(const HermitianPencil& pencil, int k, double sigma, const Mesh* mesh = nullptr);

struct CountOptions {
  bool auto_mesh = true;  // strip mesh around the certificate region for thin wedges, disk otherwise
  MeshOptions mesh;
  int k = 6;
  double margin = -1;     // < 0: five times the two-mesh error estimate
  double sigma = std::numeric_limits<double>::quiet_NaN();  // NaN: -0.05 m^2
  std::string export_prefix;  // writes <prefix>_A.mtx and <prefix>_B.mtx when set
};

// Resolved mesh options used by count_bound_states.
MeshOptions resolve_mesh_options(const PhysParams& p, const CountOptions& opt);

SpectralReport count_bound_states(const PhysParams& p, const CountOptions& opt);

nlohmann::ordered_json to_json(const SpectralReport& r);

}  // namespace brokenline
