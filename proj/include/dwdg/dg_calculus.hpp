// The DG differential calculus behind the dual-wind scheme: edge trace
// selection in each axis direction, jump/average operators, and the sparse
// lifting operators realizing the one-sided discrete partial derivatives.
//
// The discrete derivative of v in direction i with sign s is defined against
// all P1-DG test functions by
//
//   (d_i^s v, phi) = -<Q_i^s(v) n^(i), [phi]>_interior
//                    + <v n^(i), phi>_boundary        (dropped when bc_zero)
//                    - (v, d_i phi)_elements
//
// with n the stored edge normal (outward of T- on interior edges, outward of
// the domain on boundary edges). With this sign pairing the operators
// reproduce the broken derivative of continuous piecewise-linear inputs
// exactly; the per-edge trace selection below matches the forward/backward
// limit semantics of the trace operators.
#pragma once

#include <Eigen/Sparse>
#include <array>
#include <stdexcept>
#include <vector>

#include "dwdg/dg_space.hpp"
#include "dwdg/mesh.hpp"
#include "dwdg/quadrature.hpp"
#include "dwdg/sparse.hpp"

namespace dwdg {

struct TraceSide {
  int axis = 0;  // 0 for x1, 1 for x2
  int sign = +1;
};

namespace detail {

inline double normal_component(const Edge& e, int axis) {
  return axis == 0 ? e.normal.x : e.normal.y;
}

enum class TraceSel { plus, minus, average };

// which element trace Q_axis^sign picks on an interior edge
inline TraceSel trace_selection(const Edge& e, int axis, int sign) {
  const double ni = normal_component(e, axis);
  if (std::abs(ni) < 1e-14) return TraceSel::average;
  return ((ni > 0.0) == (sign > 0)) ? TraceSel::plus : TraceSel::minus;
}

}  // namespace detail

// Edge trace Q_i^{+/-}(v) at a point of edge e. Boundary edges return v^+, or
// zero when the caller requests the boundary-zero variant.
inline double trace_value(const Mesh& mesh, int edge_id, TraceSide side,
                          const DGFunction& v, Point p, bool bc_zero = false) {
  const Edge& e = mesh.edges[static_cast<std::size_t>(edge_id)];
  {
    const Point a = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
    const Point b = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
    const Point d = b - a, r = p - a;
    if (std::abs(d.x * r.y - d.y * r.x) > 1e-12)
      throw std::invalid_argument("trace_value: point not on edge");
  }
  if (e.kind == EdgeKind::boundary)
    return bc_zero ? 0.0 : evaluate(mesh, v, e.tplus, p);
  switch (detail::trace_selection(e, side.axis, side.sign)) {
    case detail::TraceSel::plus:
      return evaluate(mesh, v, e.tplus, p);
    case detail::TraceSel::minus:
      return evaluate(mesh, v, e.tminus, p);
    default:
      return 0.5 * (evaluate(mesh, v, e.tplus, p) + evaluate(mesh, v, e.tminus, p));
  }
}

// [v] = v+ - v- on interior edges, v+ on boundary edges
inline double jump(const Mesh& mesh, int edge_id, const DGFunction& v, Point p) {
  const Edge& e = mesh.edges[static_cast<std::size_t>(edge_id)];
  const double vp = evaluate(mesh, v, e.tplus, p);
  if (e.kind == EdgeKind::boundary) return vp;
  return vp - evaluate(mesh, v, e.tminus, p);
}

// {v} = (v+ + v-)/2 on interior edges, v+ on boundary edges
inline double average(const Mesh& mesh, int edge_id, const DGFunction& v, Point p) {
  const Edge& e = mesh.edges[static_cast<std::size_t>(edge_id)];
  const double vp = evaluate(mesh, v, e.tplus, p);
  if (e.kind == EdgeKind::boundary) return vp;
  return 0.5 * (vp + evaluate(mesh, v, e.tminus, p));
}

// Sparse operators realizing the four one-sided discrete partial derivatives
// on P1-DG. b[axis][sign] maps coefficients to the weak right side; the
// derivative itself is mass_inv * b * v.
struct LiftingSet {
  bool bc_zero = false;
  DofMap map;
  std::array<std::array<SparseMatrix, 2>, 2> b;  // [axis][(sign+1)/2]
  SparseMatrix mass;
  SparseMatrix mass_inv;

  const SparseMatrix& weak_matrix(int axis, int sign) const {
    return b[static_cast<std::size_t>(axis)][sign > 0 ? 1 : 0];
  }

  // coefficients of d_axis^sign v
  Eigen::VectorXd derivative(int axis, int sign, const Eigen::VectorXd& v) const {
    return mass_inv * (weak_matrix(axis, sign) * v);
  }
};

inline LiftingSet build_lifting(const Mesh& mesh, const DofMap& map, bool bc_zero) {
  if (map.kind != SpaceKind::p1dg)
    throw std::invalid_argument("build_lifting: P1-DG dofmap required");
  LiftingSet lift;
  lift.bc_zero = bc_zero;
  lift.map = map;
  lift.mass = mass_matrix(mesh, map).matrix();
  lift.mass_inv = mass_matrix_inverse(mesh, map).matrix();

  const EdgeRule& erule = edge_rule(2);  // trace products are bilinear
  const int n = map.size();

  for (int axis = 0; axis < 2; ++axis) {
    for (int si = 0; si < 2; ++si) {
      const int sign = si == 0 ? -1 : +1;
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(9 * mesh.num_triangles() +
                                            36 * mesh.num_edges()));
      // element term: -(v, d_i phi)
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double third = mesh.area(t) / 3.0;  // integral of each nodal basis
        for (int r = 0; r < 3; ++r) {
          const Point g = mesh.basis_gradient(t, r);
          const double gr = axis == 0 ? g.x : g.y;
          for (int c = 0; c < 3; ++c)
            trip.emplace_back(3 * t + r, 3 * t + c, -gr * third);
        }
      }
      for (int eid = 0; eid < mesh.num_edges(); ++eid) {
        const Edge& e = mesh.edges[static_cast<std::size_t>(eid)];
        const Point pa = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
        const Point pb = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
        if (e.kind == EdgeKind::boundary) {
          if (bc_zero) continue;  // trace of v replaced by zero
          const double ni = detail::normal_component(e, axis);
          if (std::abs(ni) < 1e-14) continue;
          const int t = e.tplus;
          for (std::size_t q = 0; q < erule.points.size(); ++q) {
            const Point x = pa + erule.points[q] * (pb - pa);
            const auto lam = mesh.barycentric(t, x);
            const double w = ni * e.length * erule.weights[q];
            for (int r = 0; r < 3; ++r)
              for (int c = 0; c < 3; ++c)
                trip.emplace_back(3 * t + r, 3 * t + c, w * lam[c] * lam[r]);
          }
          continue;
        }
        // interior edge: -<Q(v) n^(i), [phi]>; [phi] weights phi+ by +1 and
        // phi- by -1. With n^(i) = 0 the whole term vanishes (the average
        // trace is multiplied by a zero normal component).
        const double m = -detail::normal_component(e, axis);
        if (std::abs(m) < 1e-14) continue;
        std::array<std::pair<int, double>, 2> trial{};
        int ntrial = 0;
        switch (detail::trace_selection(e, axis, sign)) {
          case detail::TraceSel::plus:
            trial[0] = {e.tplus, 1.0};
            ntrial = 1;
            break;
          case detail::TraceSel::minus:
            trial[0] = {e.tminus, 1.0};
            ntrial = 1;
            break;
          default:
            trial[0] = {e.tplus, 0.5};
            trial[1] = {e.tminus, 0.5};
            ntrial = 2;
            break;
        }
        const std::array<std::pair<int, double>, 2> test = {
            std::pair<int, double>{e.tplus, 1.0},
            std::pair<int, double>{e.tminus, -1.0}};
        for (std::size_t q = 0; q < erule.points.size(); ++q) {
          const Point x = pa + erule.points[q] * (pb - pa);
          const double w = m * e.length * erule.weights[q];
          for (const auto& [tt, st] : test) {
            const auto lam_t = mesh.barycentric(tt, x);
            for (int k = 0; k < ntrial; ++k) {
              const auto& [tc, sc] = trial[static_cast<std::size_t>(k)];
              const auto lam_c = mesh.barycentric(tc, x);
              for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                  trip.emplace_back(3 * tt + r, 3 * tc + c,
                                    w * st * sc * lam_c[c] * lam_t[r]);
            }
          }
        }
      }
      SparseMatrix bm(n, n);
      bm.setFromTriplets(trip.begin(), trip.end());
      lift.b[static_cast<std::size_t>(axis)][static_cast<std::size_t>(si)] = std::move(bm);
    }
  }
  return lift;
}

}  // namespace dwdg
