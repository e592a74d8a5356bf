// Criss-cross triangulation of the unit square and the edge data used by the
// DG operators (neighbor pair, unit normal, length).
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dwdg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }

enum class EdgeKind { interior, boundary };

// For interior edges the global index of tplus exceeds that of tminus and the
// normal is the outward normal of tminus. Boundary edges store the single
// adjacent triangle as tplus and the outward normal of the domain.
struct Edge {
  std::array<int, 2> verts{-1, -1};
  double length = 0.0;
  EdgeKind kind = EdgeKind::interior;
  int tplus = -1;
  int tminus = -1;
  Point normal;
};

struct Triangle {
  std::array<int, 3> verts{-1, -1, -1};
};

class Mesh {
 public:
  int level = 0;  // N, cells per side
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> triangle_edges;

  // per-triangle geometry, filled on construction
  std::vector<double> areas;
  // basis_coef[t][j] = (a, b, c) with nodal basis N_j(x, y) = a + b x + c y
  std::vector<std::array<std::array<double, 3>, 3>> basis_coef;

  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // mesh size label h = 1/(2N); the tables are indexed by it
  double mesh_size() const { return 1.0 / (2.0 * level); }

  double area(int t) const { return areas[static_cast<std::size_t>(t)]; }

  std::array<Point, 3> triangle_points(int t) const {
    const Triangle& tri = triangles[static_cast<std::size_t>(t)];
    return {vertices[static_cast<std::size_t>(tri.verts[0])],
            vertices[static_cast<std::size_t>(tri.verts[1])],
            vertices[static_cast<std::size_t>(tri.verts[2])]};
  }

  Point centroid(int t) const {
    auto p = triangle_points(t);
    return (1.0 / 3.0) * (p[0] + p[1] + p[2]);
  }

  // barycentric coordinates of a physical point with respect to triangle t
  std::array<double, 3> barycentric(int t, Point p) const {
    const auto& c = basis_coef[static_cast<std::size_t>(t)];
    std::array<double, 3> lam;
    for (int j = 0; j < 3; ++j) lam[j] = c[j][0] + c[j][1] * p.x + c[j][2] * p.y;
    return lam;
  }

  // constant gradient of the j-th nodal basis function on triangle t
  Point basis_gradient(int t, int j) const {
    const auto& c = basis_coef[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
    return {c[1], c[2]};
  }
};

namespace detail {

inline void finalize_geometry(Mesh& mesh) {
  const std::size_t nt = mesh.triangles.size();
  mesh.areas.resize(nt);
  mesh.basis_coef.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    auto p = mesh.triangle_points(static_cast<int>(t));
    const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) -
                       (p[2].x - p[0].x) * (p[1].y - p[0].y);
    mesh.areas[t] = 0.5 * std::abs(det);
    // invert [[1,x0,y0],[1,x1,y1],[1,x2,y2]] row-wise; column j holds the
    // coefficients of N_j
    const double x0 = p[0].x, y0 = p[0].y, x1 = p[1].x, y1 = p[1].y,
                 x2 = p[2].x, y2 = p[2].y;
    const double d = x1 * y2 - x2 * y1 + x2 * y0 - x0 * y2 + x0 * y1 - x1 * y0;
    mesh.basis_coef[t][0] = {(x1 * y2 - x2 * y1) / d, (y1 - y2) / d, (x2 - x1) / d};
    mesh.basis_coef[t][1] = {(x2 * y0 - x0 * y2) / d, (y2 - y0) / d, (x0 - x2) / d};
    mesh.basis_coef[t][2] = {(x0 * y1 - x1 * y0) / d, (y0 - y1) / d, (x1 - x0) / d};
  }
}

inline void build_edges(Mesh& mesh) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> incident;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangles[static_cast<std::size_t>(t)].verts;
    for (int k = 0; k < 3; ++k) {
      const int a = v[static_cast<std::size_t>(k)];
      const int b = v[static_cast<std::size_t>((k + 1) % 3)];
      incident[{std::min(a, b), std::max(a, b)}].push_back({t, k});
    }
  }
  mesh.edges.clear();
  mesh.edges.reserve(incident.size());
  mesh.triangle_edges.assign(static_cast<std::size_t>(mesh.num_triangles()),
                             {-1, -1, -1});
  for (const auto& [key, tris] : incident) {
    Edge e;
    e.verts = {key.first, key.second};
    const Point pa = mesh.vertices[static_cast<std::size_t>(key.first)];
    const Point pb = mesh.vertices[static_cast<std::size_t>(key.second)];
    e.length = norm(pb - pa);
    const Point tang = (1.0 / e.length) * (pb - pa);
    Point n{tang.y, -tang.x};
    if (tris.size() == 2) {
      e.kind = EdgeKind::interior;
      e.tminus = std::min(tris[0].first, tris[1].first);
      e.tplus = std::max(tris[0].first, tris[1].first);
      // orient as the outward normal of tminus
      const Point mid = 0.5 * (pa + pb);
      if (dot(n, mid - mesh.centroid(e.tminus)) < 0.0) n = -1.0 * n;
    } else {
      e.kind = EdgeKind::boundary;
      e.tplus = tris[0].first;
      e.tminus = -1;
      const Point mid = 0.5 * (pa + pb);
      if (dot(n, mid - mesh.centroid(e.tplus)) < 0.0) n = -1.0 * n;
    }
    e.normal = n;
    const int id = static_cast<int>(mesh.edges.size());
    for (const auto& [t, k] : tris)
      mesh.triangle_edges[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = id;
    mesh.edges.push_back(e);
  }
}

}  // namespace detail

// Uniform criss-cross triangulation: N x N subsquares of side 1/N, each split
// into four triangles by both diagonals. Triangles are numbered row-major by
// subsquare, then south/east/north/west within it.
inline Mesh build_crisscross(int n) {
  if (n < 1) throw std::invalid_argument("build_crisscross: N must be >= 1");
  Mesh mesh;
  mesh.level = n;
  const int grid = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(grid * grid + n * n));
  for (int iy = 0; iy < grid; ++iy)
    for (int ix = 0; ix < grid; ++ix)
      mesh.vertices.push_back({static_cast<double>(ix) / n, static_cast<double>(iy) / n});
  for (int sy = 0; sy < n; ++sy)
    for (int sx = 0; sx < n; ++sx)
      mesh.vertices.push_back({(sx + 0.5) / n, (sy + 0.5) / n});
  mesh.triangles.reserve(static_cast<std::size_t>(4 * n * n));
  for (int sy = 0; sy < n; ++sy) {
    for (int sx = 0; sx < n; ++sx) {
      const int c00 = sy * grid + sx;
      const int c10 = c00 + 1;
      const int c01 = c00 + grid;
      const int c11 = c01 + 1;
      const int m = grid * grid + sy * n + sx;
      mesh.triangles.push_back({{c00, c10, m}});  // south
      mesh.triangles.push_back({{c10, c11, m}});  // east
      mesh.triangles.push_back({{c11, c01, m}});  // north
      mesh.triangles.push_back({{c01, c00, m}});  // west
    }
  }
  detail::finalize_geometry(mesh);
  detail::build_edges(mesh);
  return mesh;
}

// Disjoint partition of edge ids into (interior, boundary).
inline std::pair<std::vector<int>, std::vector<int>> classify_edges(const Mesh& mesh) {
  std::vector<int> interior, boundary;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[static_cast<std::size_t>(e)].kind == EdgeKind::interior)
      interior.push_back(e);
    else
      boundary.push_back(e);
  }
  return {interior, boundary};
}

// Triangle containing p (ties on sub-diagonals resolved in s/e/n/w order).
inline int locate_point(const Mesh& mesh, Point p) {
  const int n = mesh.level;
  const auto cell = [&](double c) {
    int i = static_cast<int>(std::floor(c * n));
    return std::max(0, std::min(n - 1, i));
  };
  const int sx = cell(p.x);
  const int sy = cell(p.y);
  const int base = 4 * (sy * n + sx);
  for (int k = 0; k < 4; ++k) {
    const auto lam = mesh.barycentric(base + k, p);
    if (lam[0] >= -1e-12 && lam[1] >= -1e-12 && lam[2] >= -1e-12) return base + k;
  }
  throw std::invalid_argument("locate_point: point outside the mesh");
}

// Plain-text dump for debugging; nothing consumes it.
inline void dump_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices:\n";
  for (const Point& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  out << "triangles:\n";
  for (const Triangle& t : mesh.triangles)
    out << t.verts[0] << " " << t.verts[1] << " " << t.verts[2] << "\n";
}

}  // namespace dwdg
