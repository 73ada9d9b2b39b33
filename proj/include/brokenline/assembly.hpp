#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "brokenline/mesh.hpp"

namespace brokenline {

using SpMat = Eigen::SparseMatrix<cplx>;
using VecXc = Eigen::VectorXcd;

struct AssemblyOptions {
  bool interaction = true;  // false: M = identity and no jump term (plain -Laplace + m^2)
  // corner pinned to zero; without the interface there is no corner to treat
  bool pin_corner() const { return interaction; }
};

// Reduced unknowns: one spinor (2 components) per free vertex, taken from the plus side on the
// interface; minus-side copies are M times it.
struct HermitianPencil {
  PhysParams params;
  bool interaction = true;
  SpMat A;  // stiffness + m^2 mass + (2m/tau) jump
  SpMat B;  // mass
  std::vector<int> dof_map;  // vertex -> first reduced index (component 0), -1 if eliminated
  int full_dofs = 0;         // 2 components per vertex copy, before elimination
  int reduced_dofs() const { return static_cast<int>(A.rows()); }
};

HermitianPencil assemble(const PhysParams& p, const Mesh& mesh, const AssemblyOptions& opt = {});

double form_value(const HermitianPencil& pencil, const VecXc& x);

// (u1, u2) -> (conj u2, conj u1) at every vertex
VecXc charge_conjugate(const VecXc& x);

// lower triangle, 1-based, "%%MatrixMarket matrix coordinate complex hermitian"
void write_matrix_market(const SpMat& M, const std::string& path);

}  // namespace brokenline
