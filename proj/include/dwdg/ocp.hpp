// The discrete KKT system of the control problem and its primal-dual active
// set solution: state solve, adjoint solve, and the per-triangle control
// updates (scalar clamp for P0, exact 27-pattern box QP for P1).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dwdg/solve.hpp"

namespace dwdg {

// Box bounds with explicit unbounded markers; clamping at a finite bound is
// exact arithmetic on the stored value.
struct BoxBounds {
  std::optional<double> lower;
  std::optional<double> upper;

  static BoxBounds unbounded() { return {}; }
  static BoxBounds interval(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("BoxBounds: requires lower < upper");
    return {lo, hi};
  }

  double clamp(double x) const {
    if (lower && x < *lower) return *lower;
    if (upper && x > *upper) return *upper;
    return x;
  }
  bool contains(double x, double tol = 0.0) const {
    if (lower && x < *lower - tol) return false;
    if (upper && x > *upper + tol) return false;
    return true;
  }
};

struct OcpConfig {
  double beta = 1.0;
  BoxBounds bounds;
  int control_degree = 0;  // k in {0,1}
  double gamma = 0.0;
  ScalarField desired_state;
  ScalarField state_source;  // empty for the plain -lap y = u constraint
  double tol = 1e-10;
  int max_iter = 100;
};

// active-set flag per control DOF: -1 lower bound, 0 free, +1 upper bound
using ActiveSet = std::vector<std::int8_t>;

struct OcpSolution {
  DGFunction state;
  DGFunction adjoint;
  DGFunction control;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  ActiveSet active;
};

// rhs entries (u, phi_r) for the state equation; exact for P0 and P1 control
inline Eigen::VectorXd control_load(const Mesh& mesh, const DGFunction& u) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * mesh.num_triangles());
  if (u.map.kind == SpaceKind::p0) {
    for (int t = 0; t < mesh.num_triangles(); ++t)
      b.segment<3>(3 * t).setConstant(u.coeffs[t] * mesh.area(t) / 3.0);
  } else {
    for (int t = 0; t < mesh.num_triangles(); ++t)
      b.segment<3>(3 * t) = element_mass(mesh, t) * u.coeffs.segment<3>(3 * t);
  }
  return b;
}

// P0 optimality: u|_T = clamp(-avg_T(p)/beta); the cell average of a linear
// is the mean of its nodal values
inline std::pair<DGFunction, ActiveSet> control_update_p0(const Mesh& mesh,
                                                          const DGFunction& p,
                                                          double beta,
                                                          const BoxBounds& bounds) {
  DGFunction u(make_dofmap(mesh, SpaceKind::p0));
  ActiveSet active(static_cast<std::size_t>(mesh.num_triangles()), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double avg = p.coeffs.segment<3>(3 * t).mean();
    const double raw = -avg / beta;
    const double v = bounds.clamp(raw);
    u.coeffs[t] = v;
    if (bounds.lower && v == *bounds.lower && raw <= *bounds.lower)
      active[static_cast<std::size_t>(t)] = -1;
    else if (bounds.upper && v == *bounds.upper && raw >= *bounds.upper)
      active[static_cast<std::size_t>(t)] = +1;
  }
  return {std::move(u), std::move(active)};
}

namespace detail {

// Exact minimizer of (beta/2) u^T M u + u^T M p over the box, by enumerating
// the 27 active-set patterns and accepting the one whose free subsystem is
// feasible with correctly signed multipliers.
inline std::array<std::int8_t, 3> solve_triangle_qp(const Eigen::Matrix3d& m,
                                                    const Eigen::Vector3d& p,
                                                    double beta, const BoxBounds& bounds,
                                                    Eigen::Vector3d& u_out) {
  const Eigen::Vector3d mp = m * p;
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  const double tol = 1e-11 * scale;
  for (int pat = 0; pat < 27; ++pat) {
    std::array<int, 3> st{};  // 0 free, 1 lower, 2 upper
    int code = pat;
    bool admissible = true;
    for (int j = 0; j < 3; ++j) {
      st[static_cast<std::size_t>(j)] = code % 3;
      code /= 3;
      if (st[static_cast<std::size_t>(j)] == 1 && !bounds.lower) admissible = false;
      if (st[static_cast<std::size_t>(j)] == 2 && !bounds.upper) admissible = false;
    }
    if (!admissible) continue;
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    std::vector<int> free_idx;
    for (int j = 0; j < 3; ++j) {
      if (st[static_cast<std::size_t>(j)] == 1) u[j] = *bounds.lower;
      else if (st[static_cast<std::size_t>(j)] == 2) u[j] = *bounds.upper;
      else free_idx.push_back(j);
    }
    const int nf = static_cast<int>(free_idx.size());
    if (nf > 0) {
      Eigen::MatrixXd mf(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (int a = 0; a < nf; ++a) {
        rhs[a] = -mp[free_idx[static_cast<std::size_t>(a)]];
        for (int b = 0; b < nf; ++b)
          mf(a, b) = beta * m(free_idx[static_cast<std::size_t>(a)],
                              free_idx[static_cast<std::size_t>(b)]);
        for (int j = 0; j < 3; ++j)
          if (st[static_cast<std::size_t>(j)] != 0)
            rhs[a] -= beta * m(free_idx[static_cast<std::size_t>(a)], j) * u[j];
      }
      const Eigen::VectorXd uf = mf.ldlt().solve(rhs);
      for (int a = 0; a < nf; ++a) u[free_idx[static_cast<std::size_t>(a)]] = uf[a];
    }
    const Eigen::Vector3d g = beta * (m * u) + mp;  // gradient of the QP
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
      switch (st[static_cast<std::size_t>(j)]) {
        case 0:
          if (!bounds.contains(u[j], tol)) ok = false;
          break;
        case 1:
          if (g[j] < -tol) ok = false;  // multiplier sign at the lower bound
          break;
        default:
          if (g[j] > tol) ok = false;
          break;
      }
      if (!ok) break;
    }
    if (ok) {
      u_out = u;
      std::array<std::int8_t, 3> flags{};
      for (int j = 0; j < 3; ++j)
        flags[static_cast<std::size_t>(j)] =
            st[static_cast<std::size_t>(j)] == 0 ? 0 : (st[static_cast<std::size_t>(j)] == 1 ? -1 : +1);
      return flags;
    }
  }
  throw std::runtime_error("control_update_p1: no KKT pattern accepted");
}

}  // namespace detail

// P1 optimality: per-triangle box QP solved exactly
inline std::pair<DGFunction, ActiveSet> control_update_p1(const Mesh& mesh,
                                                          const DGFunction& p,
                                                          double beta,
                                                          const BoxBounds& bounds) {
  DGFunction u(make_dofmap(mesh, SpaceKind::p1dg));
  ActiveSet active(static_cast<std::size_t>(3 * mesh.num_triangles()), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Eigen::Vector3d ut;
    const auto flags = detail::solve_triangle_qp(element_mass(mesh, t),
                                                 p.coeffs.segment<3>(3 * t), beta,
                                                 bounds, ut);
    u.coeffs.segment<3>(3 * t) = ut;
    for (int j = 0; j < 3; ++j)
      active[static_cast<std::size_t>(3 * t + j)] = flags[static_cast<std::size_t>(j)];
  }
  return {std::move(u), std::move(active)};
}

inline std::pair<DGFunction, ActiveSet> control_update(const Mesh& mesh,
                                                       const DGFunction& p,
                                                       const OcpConfig& config) {
  return config.control_degree == 0
             ? control_update_p0(mesh, p, config.beta, config.bounds)
             : control_update_p1(mesh, p, config.beta, config.bounds);
}

// J_h(y, u) = 1/2 ||y - y_d||^2 + beta/2 ||u||^2
inline double objective_value(const Mesh& mesh, const DGFunction& y, const DGFunction& u,
                              const OcpConfig& config) {
  const double misfit = error_l2(mesh, config.desired_state, y);
  const double unorm = l2_norm(mesh, u);
  return 0.5 * misfit * misfit + 0.5 * config.beta * unorm * unorm;
}

// max of the state residual, adjoint residual, and the control's distance to
// its own re-update (all relative)
inline double kkt_residual(const Mesh& mesh, const OcpSolution& sol,
                           const OcpConfig& config, const AssembledForms& forms) {
  const DofMap map = make_dofmap(mesh, SpaceKind::p1dg);
  Eigen::VectorXd b_state = control_load(mesh, sol.control);
  if (config.state_source)
    b_state += load_vector(mesh, config.state_source, map, 7);
  const double rs = (forms.a.matrix() * sol.state.coeffs - b_state).norm() /
                    std::max(1.0, b_state.norm());
  const Eigen::VectorXd b_adj = forms.lifting.mass * sol.state.coeffs -
                                load_vector(mesh, config.desired_state, map, 7);
  const double ra = (forms.a.matrix() * sol.adjoint.coeffs - b_adj).norm() /
                    std::max(1.0, b_adj.norm());
  const auto [u_new, active] = control_update(mesh, sol.adjoint, config);
  DGFunction diff(u_new.map, u_new.coeffs - sol.control.coeffs);
  const double rc = l2_norm(mesh, diff) / std::max(1.0, l2_norm(mesh, u_new));
  return std::max({rs, ra, rc});
}

// Fixed-point iteration on (state, adjoint, control) with active-set
// stabilization: converged when the active sets stop changing and the control
// increment is below tolerance; damping halves on active-set cycling.
inline OcpSolution pdas_solve(const Mesh& mesh, const OcpConfig& config,
                              const AssembledForms& forms) {
  if (config.beta <= 0.0) throw std::invalid_argument("pdas_solve: beta must be positive");
  if (config.control_degree != 0 && config.control_degree != 1)
    throw std::invalid_argument("pdas_solve: control degree must be 0 or 1");
  if (!config.desired_state) throw std::invalid_argument("pdas_solve: desired state missing");

  const DofMap state_map = make_dofmap(mesh, SpaceKind::p1dg);
  const DofMap control_map = make_dofmap(
      mesh, config.control_degree == 0 ? SpaceKind::p0 : SpaceKind::p1dg);

  const Eigen::VectorXd b_yd = load_vector(mesh, config.desired_state, state_map, 7);
  Eigen::VectorXd b_src = Eigen::VectorXd::Zero(state_map.size());
  if (config.state_source) b_src = load_vector(mesh, config.state_source, state_map, 7);

  DGFunction u(control_map);
  u.coeffs.setConstant(config.bounds.clamp(0.0));
  ActiveSet active(static_cast<std::size_t>(control_map.size()), 0);

  OcpSolution sol{DGFunction(state_map), DGFunction(state_map), u, 0, 0.0, false, active};

  double theta = 1.0;
  int oscillations = 0;
  std::vector<ActiveSet> history;

  for (int it = 1; it <= config.max_iter; ++it) {
    sol.state.coeffs = forms.factorization->solve(control_load(mesh, u) + b_src);
    sol.adjoint.coeffs =
        forms.factorization->solve(forms.lifting.mass * sol.state.coeffs - b_yd);
    auto [u_new, active_new] = control_update(mesh, sol.adjoint, config);

    DGFunction du(control_map, u_new.coeffs - u.coeffs);
    const double dnorm = l2_norm(mesh, du);
    const bool sets_equal = active_new == active;

    if (sets_equal && dnorm <= config.tol * std::max(1.0, l2_norm(mesh, u_new))) {
      sol.control = std::move(u_new);
      sol.active = std::move(active_new);
      sol.iterations = it;
      sol.converged = true;
      break;
    }

    // cycling detection: same active set seen before without convergence
    if (!sets_equal) {
      for (const ActiveSet& past : history)
        if (past == active_new) {
          ++oscillations;
          break;
        }
      if (oscillations > 5) {
        theta *= 0.5;
        oscillations = 0;
        history.clear();
      }
      history.push_back(active_new);
      if (history.size() > 16) history.erase(history.begin());
    }

    u.coeffs += theta * (u_new.coeffs - u.coeffs);
    active = std::move(active_new);
    sol.control = u;
    sol.active = active;
    sol.iterations = it;
  }
  sol.residual = kkt_residual(mesh, sol, config, forms);
  if (!sol.converged && sol.residual <= config.tol) sol.converged = true;
  return sol;
}

}  // namespace dwdg
