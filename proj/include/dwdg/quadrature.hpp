// Fixed-degree quadrature on the reference triangle and reference edge.
// Triangle weights sum to 1/2 (the reference measure), edge weights to 1.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dwdg/mesh.hpp"

namespace dwdg {

struct TriangleRule {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;
  int degree = 0;
};

struct EdgeRule {
  std::vector<double> points;  // parametric on [0,1]
  std::vector<double> weights;
  int degree = 0;
};

namespace detail {

// n-point Gauss-Legendre on [0,1] (exact to degree 2n-1); nodes by Newton
// iteration on P_n from the Chebyshev initial guess
inline EdgeRule gauss01(int n) {
  if (n < 1) throw std::invalid_argument("gauss01: need at least one point");
  const double pi = std::acos(-1.0);
  EdgeRule r;
  r.degree = 2 * n - 1;
  r.points.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
      const double step = pn / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    r.points[static_cast<std::size_t>(n - 1 - k)] = 0.5 * (1.0 + x);
    r.weights[static_cast<std::size_t>(n - 1 - k)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

inline void push_orbit3(TriangleRule& r, double a, double w) {
  // permutations of (1-2a, a, a); w is the normalized-to-one weight
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
}

// w is the per-point weight in the normalized-to-one convention
inline void push_orbit6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const std::array<std::array<double, 3>, 6> perms = {{{a, b, c},
                                                       {a, c, b},
                                                       {b, a, c},
                                                       {b, c, a},
                                                       {c, a, b},
                                                       {c, b, a}}};
  for (const auto& p : perms) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

// Duffy-collapsed Gauss product rule symmetrized over the 6 barycentric
// permutations; positive weights, exact to `degree` at least. `extra` adds
// points beyond the exactness requirement for transcendental integrands.
inline TriangleRule duffy_symmetric(int degree, int extra = 0) {
  const int mu = (degree + 3) / 2 + extra;  // x-factor picks up the Jacobian
  const int mv = (degree + 2) / 2 + extra;
  const EdgeRule gu = gauss01(mu);
  const EdgeRule gv = gauss01(mv);
  TriangleRule r;
  r.degree = degree;
  for (int i = 0; i < mu; ++i) {
    for (int j = 0; j < mv; ++j) {
      const double u = gu.points[static_cast<std::size_t>(i)];
      const double v = gv.points[static_cast<std::size_t>(j)];
      const double x = u, y = v * (1.0 - u);
      const double w = gu.weights[static_cast<std::size_t>(i)] *
                       gv.weights[static_cast<std::size_t>(j)] * (1.0 - u);
      const std::array<double, 3> lam = {1.0 - x - y, x, y};
      const std::array<std::array<double, 3>, 6> perms = {{{lam[0], lam[1], lam[2]},
                                                           {lam[0], lam[2], lam[1]},
                                                           {lam[1], lam[0], lam[2]},
                                                           {lam[1], lam[2], lam[0]},
                                                           {lam[2], lam[0], lam[1]},
                                                           {lam[2], lam[1], lam[0]}}};
      for (const auto& p : perms) {
        r.points.push_back(p);
        r.weights.push_back(w / 6.0);
      }
    }
  }
  return r;
}

inline TriangleRule make_triangle_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      r.weights = {0.5};
      break;
    case 2:
      push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
      // Strang, 6 points, positive
      push_orbit6(r, 0.659027622374092, 0.231933368553031, 1.0 / 6.0);
      break;
    case 4:
      push_orbit3(r, 0.445948490915965, 0.223381589678011);
      push_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      r.weights = {0.5 * 0.225};
      push_orbit3(r, 0.470142064105115, 0.132394152788506);
      push_orbit3(r, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      return duffy_symmetric(6);
    case 7:
      // the error-integration workhorse; oversampled so that quadrature error
      // stays below 1e-10 for the manufactured solutions at every level
      return duffy_symmetric(7, 3);
    default:
      throw std::invalid_argument("triangle_rule: degree must be in [1,7]");
  }
  return r;
}

}  // namespace detail

inline const TriangleRule& triangle_rule(int degree) {
  if (degree < 1 || degree > 7)
    throw std::invalid_argument("triangle_rule: degree must be in [1,7]");
  static const std::array<TriangleRule, 7> rules = [] {
    std::array<TriangleRule, 7> a;
    for (int d = 1; d <= 7; ++d) a[static_cast<std::size_t>(d - 1)] = detail::make_triangle_rule(d);
    return a;
  }();
  return rules[static_cast<std::size_t>(degree - 1)];
}

// (degree+1)-point Gauss rule: comfortably above the requested exactness, so
// the stated-degree contract holds with margin (transcendental integrands in
// the error paths rely on that margin)
inline const EdgeRule& edge_rule(int degree) {
  if (degree < 1 || degree > 9)
    throw std::invalid_argument("edge_rule: degree must be in [1,9]");
  static const std::array<EdgeRule, 10> rules = [] {
    std::array<EdgeRule, 10> a;
    for (int n = 1; n <= 10; ++n) a[static_cast<std::size_t>(n - 1)] = detail::gauss01(n);
    return a;
  }();
  return rules[static_cast<std::size_t>(degree)];
}

// integral of f over triangle t
template <class F>
double integrate(const Mesh& mesh, int t, const TriangleRule& rule, F&& f) {
  const auto p = mesh.triangle_points(t);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lam = rule.points[q];
    const Point x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
    acc += rule.weights[q] * f(x.x, x.y);
  }
  return 2.0 * mesh.area(t) * acc;
}

// integral of f over edge e (arc-length measure)
template <class F>
double integrate_edge(const Mesh& mesh, int e, const EdgeRule& rule, F&& f) {
  const Edge& edge = mesh.edges[static_cast<std::size_t>(e)];
  const Point a = mesh.vertices[static_cast<std::size_t>(edge.verts[0])];
  const Point b = mesh.vertices[static_cast<std::size_t>(edge.verts[1])];
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = a + rule.points[q] * (b - a);
    acc += rule.weights[q] * f(x.x, x.y);
  }
  return edge.length * acc;
}

}  // namespace dwdg
