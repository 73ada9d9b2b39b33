#include <doctest.h>

#include <set>

#include "brokenline/mesh.hpp"

using namespace brokenline;

namespace {
double signed_area(const Mesh& m, const std::array<int, 3>& t) {
  const Vec2 e1 = m.vertices[t[1]] - m.vertices[t[0]], e2 = m.vertices[t[2]] - m.vertices[t[0]];
  return 0.5 * (e1(0) * e2(1) - e1(1) * e2(0));
}

// centroid angle in (-pi, pi]: plus side iff |angle| < omega
bool centroid_plus(const Mesh& m, const std::array<int, 3>& t) {
  const Vec2 c = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3;
  return std::abs(std::atan2(c(1), c(0))) < m.omega;
}

void check_invariants(const Mesh& m) {
  for (std::size_t i = 0; i < m.triangles.size(); ++i) {
    CHECK(signed_area(m, m.triangles[i]) > 0);
    CHECK((m.triangle_side[i] == Side::plus) == centroid_plus(m, m.triangles[i]));
  }
  for (const auto& e : m.interface_edges) {
    CHECK(e.ray != Ray::none);
    for (int v : {e.v0, e.v1}) CHECK((m.vertex_ray[v] == e.ray || v == m.corner_vertex));
  }
  // every ray vertex except the corner carries two copies
  int on_rays = 0;
  for (int v = 0; v < int(m.vertices.size()); ++v) {
    if (v == m.corner_vertex) {
      CHECK(m.dof_copies(v) == 0);
      continue;
    }
    if (m.vertex_ray[v] != Ray::none) {
      ++on_rays;
      CHECK(m.dof_copies(v) == 2);
      const Vec2& x = m.vertices[v];
      const double t = std::atan2(x(1), x(0));
      CHECK(std::abs(std::abs(t) - m.omega) < 1e-12);
    } else {
      CHECK(m.dof_copies(v) == 1);
    }
  }
  CHECK(on_rays > 0);
}
}  // namespace

TEST_CASE("disk mesh") {
  MeshOptions o;
  o.R = 10;
  o.h = 0.5;
  o.grading = 0.5;
  auto p = make_params(-1, 1, pi / 4);
  Mesh m = build_mesh(p, o);
  REQUIRE(m.corner_vertex >= 0);
  CHECK(m.vertices[m.corner_vertex].norm() == 0);
  check_invariants(m);
  CHECK(m.area() == doctest::Approx(pi * 100).epsilon(0.01));
  CHECK(std::count(m.on_boundary.begin(), m.on_boundary.end(), 1) > 0);
  for (int v = 0; v < int(m.vertices.size()); ++v)
    if (m.on_boundary[v]) CHECK(m.vertices[v].norm() == doctest::Approx(10).epsilon(1e-12));

  o.h = 0.25;
  Mesh f = build_mesh(p, o);
  const double ratio = double(f.triangles.size()) / double(m.triangles.size());
  CHECK(ratio > 4 * 0.85);
  CHECK(ratio < 4 * 1.15);
}

TEST_CASE("straight line and narrow wedges") {
  MeshOptions o;
  o.R = 5;
  o.h = 0.4;
  check_invariants(build_mesh(pi / 2, o));
  CHECK_THROWS_AS(build_mesh(1e-3, o), InvalidParameter);
  o.h = -1;
  CHECK_THROWS_AS(build_mesh(0.5, o), InvalidParameter);
}

TEST_CASE("strip mesh") {
  const double w = 3.2e-3;
  MeshOptions o;
  o.kind = MeshKind::strip;
  o.x0 = 10;
  o.x1 = 60;
  o.Y = 60 * std::tan(w) + 7.5;
  o.h = 0.8;
  Mesh m = build_mesh(w, o);
  CHECK(m.corner_vertex < 0);
  check_invariants(m);
  CHECK(m.area() == doctest::Approx(50 * 2 * o.Y).epsilon(1e-10));
  o.Y = 0.1;
  CHECK_THROWS_AS(build_mesh(w, o), InvalidParameter);
}

TEST_CASE("red refinement") {
  MeshOptions o;
  o.R = 4;
  o.h = 0.5;
  Mesh m = build_mesh(0.6, o);
  Mesh r = refine(m);
  CHECK(r.triangles.size() == 4 * m.triangles.size());
  CHECK(r.interface_edges.size() == 2 * m.interface_edges.size());
  CHECK(r.refinements == 1);
  CHECK(r.area() == doctest::Approx(m.area()).epsilon(1e-12));
  // nested: the coarse vertices come first, unchanged
  for (std::size_t v = 0; v < m.vertices.size(); ++v) CHECK((r.vertices[v] - m.vertices[v]).norm() == 0);
  check_invariants(r);
}
