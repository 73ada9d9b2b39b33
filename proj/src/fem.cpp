#include "brokenline/fem.hpp"

#include <algorithm>
#include <cmath>

#include "brokenline/variational.hpp"

namespace brokenline {

SpectralReport solve_lowest(const HermitianPencil& pencil, int k, double sigma, const Mesh* mesh) {
  if (k < 1) throw InvalidParameter("k must be >= 1");
  EigenOptions eo;
  eo.k = k;
  eo.sigma = sigma;
  const double m2 = pencil.params.m * pencil.params.m;
  EigenResult er;
  for (int attempt = 0;; ++attempt) {
    try {
      er = lowest_eigenpairs(pencil.A, pencil.B, eo);
      break;
    } catch (const ConvergenceFailure& e) {
      // only a failed factorization is retried, with a lower shift
      if (attempt >= 8 || std::string(e.what()).find("factorization") == std::string::npos) throw;
      eo.sigma = eo.sigma - (std::abs(eo.sigma) + 0.05 * m2) * 3;
    }
  }
  SpectralReport r;
  r.eigenvalues = er.values;
  r.residuals = er.residuals;
  r.sigma = eo.sigma;
  r.restarts = er.restarts;
  const auto dc = derived_constants(pencil.params);
  r.gap_edge = dc.eps_tau * dc.eps_tau;
  r.count_below = static_cast<int>(std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                                                 [&](double mu) { return mu < r.gap_edge; }));
  r.full_dofs = pencil.full_dofs;
  r.reduced_dofs = pencil.reduced_dofs();
  if (mesh) {
    r.mesh_kind = to_string(mesh->kind);
    r.bc = to_string(mesh->bc);
    r.vertices = static_cast<int>(mesh->vertices.size());
    r.triangles = static_cast<int>(mesh->triangles.size());
    r.mesh_options = mesh->options;
  }
  return r;
}

MeshOptions resolve_mesh_options(const PhysParams& p, const CountOptions& opt) {
  MeshOptions mo = opt.mesh;
  if (!opt.auto_mesh) return mo;
  if (p.omega < 0.05 && p.tau < 0) {
    const auto ca = critical_angle_maximize(p, 1);
    const double k0 = derived_constants(p).kappa0;
    mo.kind = MeshKind::strip;
    mo.x0 = ca.L_star / 2;
    mo.x1 = 3 * ca.L_star;
    mo.Y = mo.x1 * std::tan(p.omega) + 6 / k0;
  } else {
    mo.kind = MeshKind::disk;
  }
  return mo;
}

SpectralReport count_bound_states(const PhysParams& p, const CountOptions& opt) {
  validate(p);
  const MeshOptions mo = resolve_mesh_options(p, opt);
  const double sigma = std::isnan(opt.sigma) ? -0.05 * p.m * p.m : opt.sigma;

  const Mesh mesh = build_mesh(p, mo);
  const HermitianPencil pencil = assemble(p, mesh);
  if (!opt.export_prefix.empty()) {
    write_matrix_market(pencil.A, opt.export_prefix + "_A.mtx");
    write_matrix_market(pencil.B, opt.export_prefix + "_B.mtx");
  }
  SpectralReport r = solve_lowest(pencil, opt.k, sigma, &mesh);

  const double floor = 1e-6 * r.gap_edge;
  if (opt.margin >= 0) {
    r.margin = opt.margin;
  } else {
    MeshOptions coarse = mo;
    coarse.h *= 2;
    const Mesh cm = build_mesh(p, coarse);
    const SpectralReport cr = solve_lowest(assemble(p, cm), 1, sigma, &cm);
    r.coarse_lowest = cr.eigenvalues.front();
    // P1 eigenvalue error is O(h^2): Richardson gives err(h) ~ |mu_h - mu_2h| / 3
    r.margin = std::max(5 * std::abs(r.eigenvalues.front() - r.coarse_lowest) / 3, floor);
  }
  const double thr = r.gap_edge - r.margin;
  r.count_below = static_cast<int>(std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                                                 [&](double mu) { return mu < thr; }));
  return r;
}

nlohmann::ordered_json to_json(const SpectralReport& r) {
  nlohmann::ordered_json j;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["gap_edge"] = r.gap_edge;
  j["margin"] = r.margin;
  j["threshold"] = r.gap_edge - r.margin;
  j["count_below"] = r.count_below;
  if (std::isnan(r.coarse_lowest)) j["coarse_lowest"] = nullptr;
  else j["coarse_lowest"] = r.coarse_lowest;
  j["sigma"] = r.sigma;
  j["restarts"] = r.restarts;
  nlohmann::ordered_json m;
  m["kind"] = r.mesh_kind;
  m["bc"] = r.bc;
  m["vertices"] = r.vertices;
  m["triangles"] = r.triangles;
  m["full_dofs"] = r.full_dofs;
  m["reduced_dofs"] = r.reduced_dofs;
  m["h"] = r.mesh_options.h;
  if (r.mesh_kind == "disk") {
    m["R"] = r.mesh_options.R;
    m["grading"] = r.mesh_options.grading;
  } else {
    m["x0"] = r.mesh_options.x0;
    m["x1"] = r.mesh_options.x1;
    m["Y"] = r.mesh_options.Y;
    m["inner_cells"] = r.mesh_options.inner_cells;
  }
  j["mesh"] = m;
  return j;
}

}  // namespace brokenline
