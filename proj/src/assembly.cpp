#include "brokenline/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace brokenline {

HermitianPencil assemble(const PhysParams& p, const Mesh& mesh, const AssemblyOptions& opt) {
  validate(p);
  if (std::abs(p.omega - mesh.omega) > 1e-14) throw InvalidParameter("mesh built for a different omega");
  const int nv = static_cast<int>(mesh.vertices.size());

  HermitianPencil P;
  P.params = p;
  P.interaction = opt.interaction;
  P.dof_map.assign(nv, -1);
  int n = 0;
  for (int v = 0; v < nv; ++v) {
    P.full_dofs += 2 * std::max(1, mesh.dof_copies(v));
    if (v == mesh.corner_vertex && opt.pin_corner()) continue;
    if (mesh.bc == BoundaryCondition::dirichlet && mesh.on_boundary[v]) continue;
    P.dof_map[v] = n;
    n += 2;
  }

  const Mat2 I2 = Mat2::Identity();
  Mat2 Mray[2] = {I2, I2};
  if (opt.interaction) {
    Mray[0] = m_left(p);
    Mray[1] = m_right(p);
  }
  const double m2 = p.m * p.m;

  std::vector<Eigen::Triplet<cplx>> ta, tb;
  ta.reserve(mesh.triangles.size() * 36);
  tb.reserve(mesh.triangles.size() * 36);
  auto add_block = [](std::vector<Eigen::Triplet<cplx>>& t, int r, int c, const Mat2& blk) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (blk(i, j) != cplx(0)) t.emplace_back(r + i, c + j, blk(i, j));
  };

  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    const Vec2 x0 = mesh.vertices[t[0]], x1 = mesh.vertices[t[1]], x2 = mesh.vertices[t[2]];
    const double area = 0.5 * ((x1 - x0)(0) * (x2 - x0)(1) - (x1 - x0)(1) * (x2 - x0)(0));
    // gradients of the hat functions: rotated opposite edges / (2 area)
    Vec2 g[3];
    const Vec2* X[3] = {&x0, &x1, &x2};
    for (int a = 0; a < 3; ++a) {
      const Vec2 edge = *X[(a + 2) % 3] - *X[(a + 1) % 3];
      g[a] = Vec2(-edge(1), edge(0)) / (2 * area);
    }
    Mat2 Pm[3];
    for (int a = 0; a < 3; ++a) {
      const Ray r = mesh.vertex_ray[t[a]];
      Pm[a] = (mesh.triangle_side[e] == Side::minus && r != Ray::none) ? Mray[static_cast<int>(r)] : I2;
    }
    for (int a = 0; a < 3; ++a) {
      const int ra = P.dof_map[t[a]];
      if (ra < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int rb = P.dof_map[t[b]];
        if (rb < 0) continue;
        const double K = area * g[a].dot(g[b]);
        const double Ms = area / 12 * (a == b ? 2 : 1);
        const Mat2 PP = Pm[a].adjoint() * Pm[b];
        add_block(ta, ra, rb, (K + m2 * Ms) * PP);
        add_block(tb, ra, rb, Ms * PP);
      }
    }
  }
  if (opt.interaction) {
    for (const auto& ie : mesh.interface_edges) {
      const Mat2 D = I2 - Mray[static_cast<int>(ie.ray)];
      const Mat2 J = (2 * p.m / p.tau) * (D.adjoint() * D);
      const double len = (mesh.vertices[ie.v1] - mesh.vertices[ie.v0]).norm();
      const int ids[2] = {P.dof_map[ie.v0], P.dof_map[ie.v1]};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (ids[a] >= 0 && ids[b] >= 0) add_block(ta, ids[a], ids[b], (len / 6 * (a == b ? 2 : 1)) * J);
    }
  }
  P.A.resize(n, n);
  P.B.resize(n, n);
  P.A.setFromTriplets(ta.begin(), ta.end());
  P.B.setFromTriplets(tb.begin(), tb.end());
  P.A.makeCompressed();
  P.B.makeCompressed();
  return P;
}

double form_value(const HermitianPencil& pencil, const VecXc& x) { return x.dot(pencil.A * x).real(); }

VecXc charge_conjugate(const VecXc& x) {
  VecXc y(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
    y(i) = std::conj(x(i + 1));
    y(i + 1) = std::conj(x(i));
  }
  return y;
}

void write_matrix_market(const SpMat& M, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::size_t nnz = 0;
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate complex hermitian\n");
  std::fprintf(f, "%lld %lld %zu\n", static_cast<long long>(M.rows()), static_cast<long long>(M.cols()), nnz);
  // column-major storage gives column-sorted, row-sorted entries
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it)
      if (it.row() >= it.col())
        std::fprintf(f, "%lld %lld %.17g %.17g\n", static_cast<long long>(it.row() + 1),
                     static_cast<long long>(it.col() + 1), it.value().real(), it.value().imag());
  if (std::fclose(f) != 0) throw std::runtime_error("write failed for " + path);
}

}  // namespace brokenline
