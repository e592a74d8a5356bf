// The two manufactured test problems: the unconstrained sine problem and its
// box-constrained variant. The constrained variant keeps the same state,
// adjoint, and desired state; making the clamped control exact requires the
// residual source f = -lap(state) - control in the state equation.
#pragma once

#include <cmath>
#include <stdexcept>

#include "dwdg/ocp.hpp"

namespace dwdg {

struct ExampleSpec {
  int id = 1;
  double beta = 1.0;
  BoxBounds bounds;
  ScalarField exact_state;
  VectorField exact_state_grad;
  ScalarField exact_control;
  ScalarField exact_adjoint;
  VectorField exact_adjoint_grad;
  ScalarField desired_state;
  ScalarField state_source;  // empty when the state equation is -lap y = u
};

inline ExampleSpec make_example(int id) {
  if (id != 1 && id != 2) throw std::invalid_argument("make_example: id must be 1 or 2");
  const double pi = std::acos(-1.0);
  const double pi2 = pi * pi;
  const auto ss = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };

  ExampleSpec ex;
  ex.id = id;
  ex.beta = 1.0;
  ex.exact_state = ss;
  ex.exact_state_grad = [pi](double x, double y) {
    return Point{pi * std::cos(pi * x) * std::sin(pi * y),
                 pi * std::sin(pi * x) * std::cos(pi * y)};
  };
  ex.exact_adjoint = [pi2, ss](double x, double y) { return -2.0 * pi2 * ss(x, y); };
  ex.exact_adjoint_grad = [pi, pi2](double x, double y) {
    return Point{-2.0 * pi2 * pi * std::cos(pi * x) * std::sin(pi * y),
                 -2.0 * pi2 * pi * std::sin(pi * x) * std::cos(pi * y)};
  };
  ex.desired_state = [pi2, ss](double x, double y) {
    return (1.0 + 4.0 * pi2 * pi2) * ss(x, y);
  };
  if (id == 1) {
    ex.bounds = BoxBounds::unbounded();
    ex.exact_control = [pi2, ss](double x, double y) { return 2.0 * pi2 * ss(x, y); };
  } else {
    ex.bounds = BoxBounds::interval(3.0, 15.0);
    const BoxBounds bounds = ex.bounds;
    ex.exact_control = [pi2, ss, bounds](double x, double y) {
      return bounds.clamp(2.0 * pi2 * ss(x, y));
    };
    ex.state_source = [pi2, ss, bounds](double x, double y) {
      const double raw = 2.0 * pi2 * ss(x, y);
      return raw - bounds.clamp(raw);
    };
  }
  return ex;
}

// Startup self-check on a point grid: the state equation (with source), the
// adjoint equation, and the projection form of the variational inequality
// must hold pointwise. Returns the maximum defect.
inline double example_consistency_defect(const ExampleSpec& ex, int grid = 21) {
  const double pi = std::acos(-1.0);
  const double pi2 = pi * pi;
  double defect = 0.0;
  for (int i = 1; i < grid; ++i) {
    for (int j = 1; j < grid; ++j) {
      const double x = static_cast<double>(i) / grid;
      const double y = static_cast<double>(j) / grid;
      // -lap of sin(pi x) sin(pi y) scaled fields is 2 pi^2 times the field
      const double lap_state = -2.0 * pi2 * ex.exact_state(x, y);
      const double src = ex.state_source ? ex.state_source(x, y) : 0.0;
      defect = std::max(defect,
                        std::abs(-lap_state - ex.exact_control(x, y) - src));
      const double lap_adjoint = -2.0 * pi2 * ex.exact_adjoint(x, y);
      defect = std::max(defect, std::abs(-lap_adjoint -
                                         (ex.exact_state(x, y) - ex.desired_state(x, y))));
      const double proj = ex.bounds.clamp(-ex.exact_adjoint(x, y) / ex.beta);
      defect = std::max(defect, std::abs(proj - ex.exact_control(x, y)));
    }
  }
  return defect;
}

inline OcpConfig make_config(const ExampleSpec& ex, int control_degree, double gamma,
                             double tol = 1e-10, int max_iter = 100) {
  OcpConfig cfg;
  cfg.beta = ex.beta;
  cfg.bounds = ex.bounds;
  cfg.control_degree = control_degree;
  cfg.gamma = gamma;
  cfg.desired_state = ex.desired_state;
  cfg.state_source = ex.state_source;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

}  // namespace dwdg
