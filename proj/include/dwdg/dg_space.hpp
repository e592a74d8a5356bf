// Degree-of-freedom management and basis operations for the broken spaces:
// P1-DG (state/adjoint, nodal basis per triangle) and P0 (control).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dwdg/mesh.hpp"
#include "dwdg/quadrature.hpp"
#include "dwdg/sparse.hpp"

namespace dwdg {

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<Point(double, double)>;

enum class SpaceKind { p1dg, p0 };

struct DofMap {
  SpaceKind kind = SpaceKind::p1dg;
  int num_triangles = 0;

  int dofs_per_triangle() const { return kind == SpaceKind::p1dg ? 3 : 1; }
  int size() const { return num_triangles * dofs_per_triangle(); }
  int offset(int t) const { return t * dofs_per_triangle(); }
};

inline DofMap make_dofmap(const Mesh& mesh, SpaceKind kind) {
  return DofMap{kind, mesh.num_triangles()};
}

// Coefficients in the per-triangle nodal (P1) or constant (P0) basis.
struct DGFunction {
  DofMap map;
  Eigen::VectorXd coeffs;

  explicit DGFunction(DofMap m) : map(m), coeffs(Eigen::VectorXd::Zero(m.size())) {}
  DGFunction(DofMap m, Eigen::VectorXd c) : map(m), coeffs(std::move(c)) {
    if (coeffs.size() != map.size())
      throw std::invalid_argument("DGFunction: coefficient size mismatch");
  }
};

// value from barycentric coordinates (no geometry lookup)
inline double evaluate_bary(const DGFunction& f, int t, const std::array<double, 3>& lam) {
  if (f.map.kind == SpaceKind::p0) return f.coeffs[f.map.offset(t)];
  const int o = f.map.offset(t);
  return lam[0] * f.coeffs[o] + lam[1] * f.coeffs[o + 1] + lam[2] * f.coeffs[o + 2];
}

inline double evaluate(const Mesh& mesh, const DGFunction& f, int t, Point p) {
  if (t < 0 || t >= mesh.num_triangles())
    throw std::invalid_argument("evaluate: triangle index out of range");
  if (f.map.kind == SpaceKind::p0) return f.coeffs[f.map.offset(t)];
  return evaluate_bary(f, t, mesh.barycentric(t, p));
}

// nodal interpolant onto P1-DG
inline DGFunction interpolate_nodal(const Mesh& mesh, const ScalarField& g) {
  DGFunction f(make_dofmap(mesh, SpaceKind::p1dg));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    for (int j = 0; j < 3; ++j) f.coeffs[3 * t + j] = g(p[j].x, p[j].y);
  }
  return f;
}

// cell-average projection onto P0
inline DGFunction project_cellavg(const Mesh& mesh, const ScalarField& g, int degree = 4) {
  DGFunction f(make_dofmap(mesh, SpaceKind::p0));
  const TriangleRule& rule = triangle_rule(degree);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    f.coeffs[t] = integrate(mesh, t, rule, g) / mesh.area(t);
  return f;
}

// 3x3 element mass matrix of the P1 nodal basis
inline Eigen::Matrix3d element_mass(const Mesh& mesh, int t) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return (mesh.area(t) / 12.0) * m;
}

// block-diagonal mass matrix (3x3 blocks for P1-DG, 1x1 for P0)
inline SparseSymMatrix mass_matrix(const Mesh& mesh, const DofMap& map) {
  std::vector<Eigen::Triplet<double>> trip;
  if (map.kind == SpaceKind::p0) {
    trip.reserve(static_cast<std::size_t>(map.size()));
    for (int t = 0; t < mesh.num_triangles(); ++t)
      trip.emplace_back(t, t, mesh.area(t));
  } else {
    trip.reserve(static_cast<std::size_t>(9 * mesh.num_triangles()));
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Eigen::Matrix3d m = element_mass(mesh, t);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          trip.emplace_back(3 * t + r, 3 * t + c, m(r, c));
    }
  }
  SparseMatrix m(map.size(), map.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseSymMatrix(std::move(m));
}

inline SparseSymMatrix mass_matrix_inverse(const Mesh& mesh, const DofMap& map) {
  std::vector<Eigen::Triplet<double>> trip;
  if (map.kind == SpaceKind::p0) {
    for (int t = 0; t < mesh.num_triangles(); ++t)
      trip.emplace_back(t, t, 1.0 / mesh.area(t));
  } else {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Eigen::Matrix3d mi = element_mass(mesh, t).inverse();
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          trip.emplace_back(3 * t + r, 3 * t + c, mi(r, c));
    }
  }
  SparseMatrix m(map.size(), map.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseSymMatrix(std::move(m));
}

// L2 norm of a DG function (exact, via the mass matrix blocks)
inline double l2_norm(const Mesh& mesh, const DGFunction& f) {
  double acc = 0.0;
  if (f.map.kind == SpaceKind::p0) {
    for (int t = 0; t < mesh.num_triangles(); ++t)
      acc += mesh.area(t) * f.coeffs[t] * f.coeffs[t];
  } else {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Eigen::Vector3d v = f.coeffs.segment<3>(3 * t);
      acc += v.dot(element_mass(mesh, t) * v);
    }
  }
  return std::sqrt(acc);
}

}  // namespace dwdg
