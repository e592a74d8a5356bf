// Assembly of the symmetric dual-wind bilinear form, the jump penalty, load
// vectors, and the energy/L2 error evaluations against analytic solutions.
#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "dwdg/dg_calculus.hpp"
#include "dwdg/dg_space.hpp"
#include "dwdg/mesh.hpp"
#include "dwdg/quadrature.hpp"
#include "dwdg/sparse.hpp"

namespace dwdg {

struct InvalidPenaltyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Single global penalty constant gamma_e := gamma for every edge. May be
// negative; admissibility is checked where it matters.
struct PenaltyConfig {
  double gamma = 0.0;
};

// Edge penalty matrix: sum_e (gamma/h_e) <[v],[w]>_e, boundary edges included
// with [v] = v+. The 1/h_e cancels against the arc-length measure.
inline SparseSymMatrix penalty_matrix(const Mesh& mesh, const PenaltyConfig& penalty) {
  const EdgeRule& erule = edge_rule(2);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(36 * mesh.num_edges()));
  for (int eid = 0; eid < mesh.num_edges(); ++eid) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(eid)];
    const Point pa = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
    const Point pb = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
    std::array<std::pair<int, double>, 2> sides{};
    int nsides = 1;
    sides[0] = {e.tplus, 1.0};
    if (e.kind == EdgeKind::interior) {
      sides[1] = {e.tminus, -1.0};
      nsides = 2;
    }
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Point x = pa + erule.points[q] * (pb - pa);
      const double w = penalty.gamma * erule.weights[q];
      for (int a = 0; a < nsides; ++a) {
        const auto lam_a = mesh.barycentric(sides[static_cast<std::size_t>(a)].first, x);
        for (int b = 0; b < nsides; ++b) {
          const auto lam_b = mesh.barycentric(sides[static_cast<std::size_t>(b)].first, x);
          const double s = sides[static_cast<std::size_t>(a)].second *
                           sides[static_cast<std::size_t>(b)].second;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
              trip.emplace_back(3 * sides[static_cast<std::size_t>(a)].first + r,
                                3 * sides[static_cast<std::size_t>(b)].first + c,
                                w * s * lam_b[c] * lam_a[r]);
        }
      }
    }
  }
  SparseMatrix p(mesh.num_triangles() * 3, mesh.num_triangles() * 3);
  p.setFromTriplets(trip.begin(), trip.end());
  return SparseSymMatrix(std::move(p));
}

// A = 1/2 sum_{i,s} B_{i,s}^T M^{-1} B_{i,s} + P(gamma), symmetric.
inline SparseSymMatrix assemble_ah(const Mesh& mesh, const LiftingSet& lifting,
                                   const PenaltyConfig& penalty) {
  if (!lifting.bc_zero)
    throw std::invalid_argument("assemble_ah: lifting must use the boundary-zero variant");
  SparseMatrix a = penalty_matrix(mesh, penalty).matrix();
  for (int axis = 0; axis < 2; ++axis) {
    for (int sign : {-1, +1}) {
      const SparseMatrix& b = lifting.weak_matrix(axis, sign);
      const SparseMatrix g = lifting.mass_inv * b;
      a += SparseMatrix(0.5 * (b.transpose() * g));
    }
  }
  return symmetrized(a);
}

// entries int_T g phi_r dx by quadrature of the given degree
inline Eigen::VectorXd load_vector(const Mesh& mesh, const ScalarField& g,
                                   const DofMap& map, int degree = 4) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(map.size());
  const TriangleRule& rule = triangle_rule(degree);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    const double scale = 2.0 * mesh.area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
      const double gw = scale * rule.weights[q] * g(x.x, x.y);
      if (map.kind == SpaceKind::p0) {
        b[t] += gw;
      } else {
        for (int r = 0; r < 3; ++r) b[3 * t + r] += gw * lam[r];
      }
    }
  }
  return b;
}

namespace detail {

// squared jump penalty of a P1-DG coefficient vector
inline double jump_penalty_sq(const Mesh& mesh, const Eigen::VectorXd& v,
                              const PenaltyConfig& penalty) {
  if (penalty.gamma == 0.0) return 0.0;
  const EdgeRule& erule = edge_rule(2);
  double acc = 0.0;
  for (int eid = 0; eid < mesh.num_edges(); ++eid) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(eid)];
    const Point pa = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
    const Point pb = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Point x = pa + erule.points[q] * (pb - pa);
      const auto lp = mesh.barycentric(e.tplus, x);
      double j = lp[0] * v[3 * e.tplus] + lp[1] * v[3 * e.tplus + 1] +
                 lp[2] * v[3 * e.tplus + 2];
      if (e.kind == EdgeKind::interior) {
        const auto lm = mesh.barycentric(e.tminus, x);
        j -= lm[0] * v[3 * e.tminus] + lm[1] * v[3 * e.tminus + 1] +
             lm[2] * v[3 * e.tminus + 2];
      }
      acc += penalty.gamma * erule.weights[q] * j * j;
    }
  }
  return acc;
}

inline double mass_norm_sq(const Mesh& mesh, const Eigen::VectorXd& v) {
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector3d s = v.segment<3>(3 * t);
    acc += s.dot(element_mass(mesh, t) * s);
  }
  return acc;
}

}  // namespace detail

// |||v|||^2 = 1/2 sum_s ||grad_{h,0}^s v||^2 + sum_e (gamma/h_e) ||[v]||^2_e.
// Throws InvalidPenaltyError when the square comes out negative (gamma below
// the admissible range).
inline double energy_norm(const Mesh& mesh, const DGFunction& v,
                          const LiftingSet& lifting, const PenaltyConfig& penalty) {
  double sq = detail::jump_penalty_sq(mesh, v.coeffs, penalty);
  for (int axis = 0; axis < 2; ++axis)
    for (int sign : {-1, +1}) {
      const Eigen::VectorXd g = lifting.derivative(axis, sign, v.coeffs);
      sq += 0.5 * detail::mass_norm_sq(mesh, g);
    }
  if (sq < 0.0) {
    if (sq > -1e-13 * (1.0 + v.coeffs.squaredNorm())) return 0.0;
    throw InvalidPenaltyError("energy_norm: negative squared norm, penalty inadmissible");
  }
  return std::sqrt(sq);
}

// analytic reference solution with its gradient
struct AnalyticFunction {
  ScalarField value;
  VectorField gradient;
};

// element-local L2 projection of an analytic gradient onto P1-DG, one
// coefficient vector per component
inline std::array<Eigen::VectorXd, 2> project_gradient(const Mesh& mesh,
                                                       const VectorField& grad,
                                                       int degree = 7) {
  const int n = 3 * mesh.num_triangles();
  std::array<Eigen::VectorXd, 2> out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const TriangleRule& rule = triangle_rule(degree);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    const double scale = 2.0 * mesh.area(t);
    Eigen::Vector3d rhs0 = Eigen::Vector3d::Zero();
    Eigen::Vector3d rhs1 = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
      const Point g = grad(x.x, x.y);
      for (int r = 0; r < 3; ++r) {
        rhs0[r] += scale * rule.weights[q] * g.x * lam[r];
        rhs1[r] += scale * rule.weights[q] * g.y * lam[r];
      }
    }
    const Eigen::Matrix3d m = element_mass(mesh, t);
    out[0].segment<3>(3 * t) = m.ldlt().solve(rhs0);
    out[1].segment<3>(3 * t) = m.ldlt().solve(rhs1);
  }
  return out;
}

// Energy-norm error |||exact - v_h|||. The exact function is continuous with
// zero boundary trace, so its one-sided discrete gradients reduce to the
// element-local projection of the analytic gradient and the jump terms carry
// only -[v_h] (interior) and -v_h^+ (boundary).
inline double error_energy(const Mesh& mesh, const AnalyticFunction& exact,
                           const DGFunction& v, const LiftingSet& lifting,
                           const PenaltyConfig& penalty, int degree = 7) {
  const auto q = project_gradient(mesh, exact.gradient, degree);
  double sq = detail::jump_penalty_sq(mesh, v.coeffs, penalty);
  for (int axis = 0; axis < 2; ++axis)
    for (int sign : {-1, +1}) {
      const Eigen::VectorXd d =
          q[static_cast<std::size_t>(axis)] - lifting.derivative(axis, sign, v.coeffs);
      sq += 0.5 * detail::mass_norm_sq(mesh, d);
    }
  if (sq < 0.0) {
    if (sq > -1e-13 * (1.0 + v.coeffs.squaredNorm())) return 0.0;
    throw InvalidPenaltyError("error_energy: negative squared error, penalty inadmissible");
  }
  return std::sqrt(sq);
}

// L2 error by degree-7 quadrature (default)
inline double error_l2(const Mesh& mesh, const ScalarField& exact, const DGFunction& v,
                       int degree = 7) {
  const TriangleRule& rule = triangle_rule(degree);
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    const double scale = 2.0 * mesh.area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
      const double d = exact(x.x, x.y) - evaluate_bary(v, t, lam);
      acc += scale * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(acc);
}

}  // namespace dwdg
