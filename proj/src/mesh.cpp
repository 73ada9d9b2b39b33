#include "brokenline/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace brokenline {

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann"; }
std::string to_string(MeshKind k) { return k == MeshKind::disk ? "disk" : "strip"; }

int Mesh::dof_copies(int v) const {
  if (v == corner_vertex) return 0;
  return vertex_ray[v] == Ray::none ? 1 : 2;
}

double Mesh::area() const {
  double s = 0;
  for (const auto& t : triangles) {
    const Vec2 e1 = vertices[t[1]] - vertices[t[0]], e2 = vertices[t[2]] - vertices[t[0]];
    s += 0.5 * (e1(0) * e2(1) - e1(1) * e2(0));
  }
  return s;
}

namespace {

double signed_area(const Mesh& m, const std::array<int, 3>& t) {
  const Vec2 e1 = m.vertices[t[1]] - m.vertices[t[0]], e2 = m.vertices[t[2]] - m.vertices[t[0]];
  return 0.5 * (e1(0) * e2(1) - e1(1) * e2(0));
}

void add_triangle(Mesh& m, int a, int b, int c, Side s) {
  std::array<int, 3> t{a, b, c};
  if (signed_area(m, t) < 0) std::swap(t[1], t[2]);
  m.triangles.push_back(t);
  m.triangle_side.push_back(s);
}

int add_vertex(Mesh& m, const Vec2& x, Ray ray, bool boundary) {
  m.vertices.push_back(x);
  m.vertex_ray.push_back(ray);
  m.on_boundary.push_back(boundary ? 1 : 0);
  return static_cast<int>(m.vertices.size()) - 1;
}

// Triangulate the band between two node chains of one sector, sorted by angle.
void zipper(Mesh& m, const std::vector<int>& in, const std::vector<double>& tin,
            const std::vector<int>& out, const std::vector<double>& tout, Side s) {
  std::size_t i = 0, k = 0;
  while (i + 1 < in.size() || k + 1 < out.size()) {
    const bool advance_out =
        i + 1 >= in.size() || (k + 1 < out.size() && tout[k + 1] <= tin[i + 1]);
    if (advance_out) {
      add_triangle(m, in[i], out[k], out[k + 1], s);
      ++k;
    } else {
      add_triangle(m, in[i], out[k], in[i + 1], s);
      ++i;
    }
  }
}

Mesh build_disk(double omega, const MeshOptions& o) {
  if (!(o.R > 0) || !(o.h > 0) || !(o.grading >= 0)) throw InvalidParameter("disk mesh needs R > 0, h > 0, grading >= 0");
  if (o.h > 2 * omega * o.R) {
    std::ostringstream os;
    os << "opening angle too small for h: need h <= " << 2 * omega * o.R << " (or use the strip mesh)";
    throw InvalidParameter(os.str());
  }
  Mesh m;
  m.kind = MeshKind::disk;
  m.bc = o.bc;
  m.omega = omega;
  m.options = o;

  auto size_at = [&](double r) { return o.h * std::pow(std::min(r, o.R) / o.R, o.grading); };
  std::vector<double> radii{0.0};
  double r = size_at(o.h);
  while (r < o.R - 0.5 * size_at(r)) {
    radii.push_back(r);
    r += size_at(r);
  }
  radii.push_back(o.R);

  m.corner_vertex = add_vertex(m, Vec2::Zero(), Ray::none, false);
  const double span[2] = {2 * omega, 2 * pi - 2 * omega};
  const double start[2] = {-omega, omega};
  // per ring and sector: node ids and angles; ray nodes are shared between sectors
  std::vector<std::array<std::vector<int>, 2>> ring_ids;
  std::vector<std::array<std::vector<double>, 2>> ring_th;
  ring_ids.push_back({std::vector<int>{0, 0}, std::vector<int>{0, 0}});
  ring_th.push_back({std::vector<double>{start[0], start[0] + span[0]},
                     std::vector<double>{start[1], start[1] + span[1]}});
  for (std::size_t j = 1; j < radii.size(); ++j) {
    const double rj = radii[j], hl = size_at(rj);
    const bool bnd = j + 1 == radii.size();
    const int right_id = add_vertex(m, rj * Vec2(std::cos(omega), -std::sin(omega)), Ray::right, bnd);
    const int left_id = add_vertex(m, rj * Vec2(std::cos(omega), std::sin(omega)), Ray::left, bnd);
    std::array<std::vector<int>, 2> ids;
    std::array<std::vector<double>, 2> th;
    for (int s = 0; s < 2; ++s) {
      const int n = std::max(s == 0 ? 1 : 2, static_cast<int>(std::ceil(span[s] * rj / hl)));
      const int first = s == 0 ? right_id : left_id, last = s == 0 ? left_id : right_id;
      for (int i = 0; i <= n; ++i) {
        const double t = start[s] + span[s] * i / n;
        int id;
        if (i == 0) id = first;
        else if (i == n) id = last;
        else id = add_vertex(m, rj * Vec2(std::cos(t), std::sin(t)), Ray::none, bnd);
        ids[s].push_back(id);
        th[s].push_back(t);
      }
    }
    ring_ids.push_back(ids);
    ring_th.push_back(th);
  }
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
    for (int s = 0; s < 2; ++s) {
      const Side side = s == 0 ? Side::plus : Side::minus;
      if (j == 0) {
        const auto& out = ring_ids[1][s];
        for (std::size_t k = 0; k + 1 < out.size(); ++k) add_triangle(m, 0, out[k], out[k + 1], side);
      } else {
        zipper(m, ring_ids[j][s], ring_th[j][s], ring_ids[j + 1][s], ring_th[j + 1][s], side);
      }
    }
    const int a_r = ring_ids[j][0].front(), b_r = ring_ids[j + 1][0].front();
    const int a_l = ring_ids[j][0].back(), b_l = ring_ids[j + 1][0].back();
    m.interface_edges.push_back({a_r, b_r, Ray::right});
    m.interface_edges.push_back({a_l, b_l, Ray::left});
  }
  return m;
}

Mesh build_strip(double omega, const MeshOptions& o) {
  if (!(o.x0 > 0) || !(o.x1 > o.x0) || !(o.h > 0) || o.inner_cells < 1)
    throw InvalidParameter("strip mesh needs 0 < x0 < x1, h > 0, inner_cells >= 1");
  const double t = std::tan(omega);
  if (!(o.Y > o.x1 * t)) throw InvalidParameter("strip half-width Y must exceed x1 tan(omega)");
  Mesh m;
  m.kind = MeshKind::strip;
  m.bc = o.bc;
  m.omega = omega;
  m.options = o;

  // outer y profile on [0, 1]: geometric growth from the inner cell size up to h
  const double xmid = 0.5 * (o.x0 + o.x1);
  const double width = o.Y - xmid * t;
  const double first = std::min(o.h, 2 * xmid * t / o.inner_cells);
  std::vector<double> q{0.0};
  double y = 0, dy = first;
  while (y + dy < width - 0.5 * std::min(dy, o.h)) {
    y += dy;
    q.push_back(y);
    dy = std::min(o.h, dy * 1.1);
  }
  q.push_back(width);
  for (double& v : q) v /= width;
  const int nout = static_cast<int>(q.size()) - 1, nin = o.inner_cells;
  const int ny = nin + 1 + 2 * nout;
  const int nx = std::max(1, static_cast<int>(std::ceil((o.x1 - o.x0) / o.h)));

  auto id = [&](int i, int j) { return i * ny + j; };
  for (int i = 0; i <= nx; ++i) {
    const double x = o.x0 + (o.x1 - o.x0) * i / nx, yi = x * t;
    for (int j = 0; j < ny; ++j) {
      double yy;
      Ray ray = Ray::none;
      if (j < nout) {
        yy = -yi - (o.Y - yi) * q[nout - j];
      } else if (j <= nout + nin) {
        const int k = j - nout;
        yy = -yi + 2 * yi * k / nin;
        if (k == 0) ray = Ray::right;
        if (k == nin) ray = Ray::left;
      } else {
        yy = yi + (o.Y - yi) * q[j - nout - nin];
      }
      const bool bnd = i == 0 || i == nx || j == 0 || j == ny - 1;
      add_vertex(m, Vec2(x, yy), ray, bnd);
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const Side s = (j >= nout && j < nout + nin) ? Side::plus : Side::minus;
      // alternate diagonals to avoid a global bias
      if ((i + j) % 2 == 0) {
        add_triangle(m, id(i, j), id(i + 1, j), id(i + 1, j + 1), s);
        add_triangle(m, id(i, j), id(i + 1, j + 1), id(i, j + 1), s);
      } else {
        add_triangle(m, id(i, j), id(i + 1, j), id(i, j + 1), s);
        add_triangle(m, id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), s);
      }
    }
    m.interface_edges.push_back({id(i, nout), id(i + 1, nout), Ray::right});
    m.interface_edges.push_back({id(i, nout + nin), id(i + 1, nout + nin), Ray::left});
  }
  return m;
}

}  // namespace

Mesh build_mesh(double omega, const MeshOptions& o) {
  if (!(omega > 0) || omega > pi / 2 + 1e-15) throw InvalidParameter("omega must lie in (0, pi/2]");
  return o.kind == MeshKind::disk ? build_disk(omega, o) : build_strip(omega, o);
}

Mesh build_mesh(const PhysParams& p, const MeshOptions& o) {
  validate(p);
  return build_mesh(p.omega, o);
}

Mesh refine(const Mesh& in) {
  Mesh m;
  m.kind = in.kind;
  m.bc = in.bc;
  m.omega = in.omega;
  m.options = in.options;
  m.vertices = in.vertices;
  m.vertex_ray = in.vertex_ray;
  m.on_boundary = in.on_boundary;
  m.corner_vertex = in.corner_vertex;
  m.refinements = in.refinements + 1;

  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : in.triangles)
    for (int e = 0; e < 3; ++e) ++edge_count[key(t[e], t[(e + 1) % 3])];
  std::map<std::pair<int, int>, Ray> iface;
  for (const auto& e : in.interface_edges) iface[key(e.v0, e.v1)] = e.ray;

  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto k = key(a, b);
    auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    const auto f = iface.find(k);
    const Ray ray = f == iface.end() ? Ray::none : f->second;
    const bool bnd = edge_count[k] == 1 && in.on_boundary[a] && in.on_boundary[b];
    const int id = add_vertex(m, 0.5 * (in.vertices[a] + in.vertices[b]), ray, bnd);
    mid.emplace(k, id);
    return id;
  };
  for (std::size_t i = 0; i < in.triangles.size(); ++i) {
    const auto& t = in.triangles[i];
    const Side s = in.triangle_side[i];
    const int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
    add_triangle(m, t[0], a, c, s);
    add_triangle(m, a, t[1], b, s);
    add_triangle(m, c, b, t[2], s);
    add_triangle(m, a, b, c, s);
  }
  for (const auto& e : in.interface_edges) {
    const int c = midpoint(e.v0, e.v1);
    m.interface_edges.push_back({e.v0, c, e.ray});
    m.interface_edges.push_back({c, e.v1, e.ray});
  }
  return m;
}

}  // namespace brokenline
