#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "brokenline/model.hpp"

namespace brokenline {

enum class BoundaryCondition { dirichlet, neumann };
enum class MeshKind { disk, strip };
enum class Side : std::uint8_t { plus, minus };
enum class Ray : std::int8_t { none = -1, left = 0, right = 1 };

std::string to_string(BoundaryCondition bc);
std::string to_string(MeshKind k);

struct InterfaceEdge {
  int v0, v1;
  Ray ray;
};

struct MeshOptions {
  MeshKind kind = MeshKind::disk;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double R = 10;        // disk radius
  double h = 0.5;       // target size away from the corner
  double grading = 1;   // local size ~ h (r/R)^grading near the corner
  // strip region [x0, x1] x [-Y, Y]
  double x0 = 0, x1 = 0, Y = 0;
  int inner_cells = 4;  // across the plus region in each column
};

struct Mesh {
  MeshKind kind = MeshKind::disk;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double omega = 0;
  MeshOptions options;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<Side> triangle_side;
  std::vector<InterfaceEdge> interface_edges;
  std::vector<Ray> vertex_ray;       // which ray a vertex lies on
  std::vector<char> on_boundary;     // artificial outer boundary
  int corner_vertex = -1;
  int refinements = 0;

  // 2 on the interface, 1 elsewhere, 0 at the corner (both copies pinned to zero)
  int dof_copies(int v) const;
  double area() const;
};

Mesh build_mesh(double omega, const MeshOptions& o);
Mesh build_mesh(const PhysParams& p, const MeshOptions& o);

// Red refinement: every triangle split into four; nested with the input.
Mesh refine(const Mesh& mesh);

}  // namespace brokenline
