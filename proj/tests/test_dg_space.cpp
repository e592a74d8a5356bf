#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dwdg/dg_space.hpp"
#include "dwdg/forms.hpp"

using namespace dwdg;

namespace {
const double kPi = std::acos(-1.0);
double sinsin(double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }

// aggregate slope of log2(e(N)/e(2N)) over a level range
template <class ErrFn>
double aggregate_rate(ErrFn&& err, int n_lo, int n_hi) {
  const double e_lo = err(n_lo);
  const double e_hi = err(n_hi);
  return std::log2(e_lo / e_hi) / std::log2(static_cast<double>(n_hi) / n_lo);
}
}  // namespace

TEST_CASE("dofmap sizes and offsets") {
  const Mesh mesh = build_crisscross(2);
  const DofMap p1 = make_dofmap(mesh, SpaceKind::p1dg);
  const DofMap p0 = make_dofmap(mesh, SpaceKind::p0);
  CHECK(p1.size() == 3 * mesh.num_triangles());
  CHECK(p0.size() == mesh.num_triangles());
  for (int t = 1; t < mesh.num_triangles(); ++t) {
    CHECK(p1.offset(t) == p1.offset(t - 1) + 3);
    CHECK(p0.offset(t) == p0.offset(t - 1) + 1);
  }
}

TEST_CASE("evaluate: constant, linear reproduction, P0, index guard") {
  const Mesh mesh = build_crisscross(2);
  DGFunction c(make_dofmap(mesh, SpaceKind::p1dg));
  c.coeffs.setConstant(7.5);
  CHECK_THAT(evaluate(mesh, c, 3, mesh.centroid(3)), Catch::Matchers::WithinRel(7.5, 1e-14));

  // nodal coefficients equal to the x1 coordinate reproduce x1
  DGFunction lin = interpolate_nodal(mesh, [](double x, double) { return x; });
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point ctr = mesh.centroid(t);
    CHECK_THAT(evaluate(mesh, lin, t, ctr), Catch::Matchers::WithinAbs(ctr.x, 1e-14));
  }

  DGFunction p0(make_dofmap(mesh, SpaceKind::p0));
  p0.coeffs[5] = -3.0;
  CHECK(evaluate(mesh, p0, 5, mesh.centroid(5)) == -3.0);
  CHECK_THROWS_AS(evaluate(mesh, p0, mesh.num_triangles(), Point{0.5, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("cell-average projection: constants, linears at the centroid") {
  const Mesh mesh = build_crisscross(3);
  const DGFunction c = project_cellavg(mesh, [](double, double) { return 4.25; });
  for (int t = 0; t < mesh.num_triangles(); ++t)
    CHECK_THAT(c.coeffs[t], Catch::Matchers::WithinRel(4.25, 1e-13));

  const DGFunction lin = project_cellavg(mesh, [](double x, double y) { return 2 * x - y; });
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point ctr = mesh.centroid(t);
    CHECK_THAT(lin.coeffs[t], Catch::Matchers::WithinAbs(2 * ctr.x - ctr.y, 1e-13));
  }
}

TEST_CASE("cell-average projection error decays at first order") {
  const auto ubar = [](double x, double y) { return 2.0 * kPi * kPi * sinsin(x, y); };
  const auto err = [&](int n) {
    const Mesh mesh = build_crisscross(n);
    const DGFunction pu = project_cellavg(mesh, ubar);
    return error_l2(mesh, ubar, pu);
  };
  const double rate = aggregate_rate(err, 4, 32);
  CHECK_THAT(rate, Catch::Matchers::WithinAbs(1.0, 0.05));
}

TEST_CASE("orthogonality of the cell-average projection") {
  const Mesh mesh = build_crisscross(2);
  // (g - P0 g, q) = 0 for every piecewise constant q and cubic g
  const auto g = [](double x, double y) { return x * x * x - 2 * x * y * y + y; };
  const DGFunction pg = project_cellavg(mesh, g);
  const TriangleRule& rule = triangle_rule(4);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double resid = integrate(mesh, t, rule, [&](double x, double y) {
      return g(x, y) - pg.coeffs[t];
    });
    CHECK_THAT(resid, Catch::Matchers::WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("nodal interpolation: exact on globals linears, bounds preserved") {
  const Mesh mesh = build_crisscross(2);
  const auto g = [](double x, double y) { return 1.0 + 2.0 * x - 3.0 * y; };
  const DGFunction ig = interpolate_nodal(mesh, g);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point ctr = mesh.centroid(t);
    CHECK_THAT(evaluate(mesh, ig, t, ctr), Catch::Matchers::WithinAbs(g(ctr.x, ctr.y), 1e-13));
  }
  // values in [0,1] stay in [0,1] nodally
  const DGFunction is = interpolate_nodal(mesh, sinsin);
  for (int i = 0; i < is.coeffs.size(); ++i) {
    CHECK(is.coeffs[i] >= -1e-15);
    CHECK(is.coeffs[i] <= 1.0 + 1e-15);
  }
}

TEST_CASE("nodal interpolation error decays at second order") {
  const auto err = [&](int n) {
    const Mesh mesh = build_crisscross(n);
    const DGFunction iy = interpolate_nodal(mesh, sinsin);
    return error_l2(mesh, sinsin, iy);
  };
  const double rate = aggregate_rate(err, 4, 32);
  CHECK_THAT(rate, Catch::Matchers::WithinAbs(2.0, 0.1));
}

TEST_CASE("mass matrix: P0 diagonal of areas, SPD, integrates one") {
  const Mesh mesh = build_crisscross(1);
  const SparseSymMatrix m0 = mass_matrix(mesh, make_dofmap(mesh, SpaceKind::p0));
  CHECK(m0.dim() == 4);
  for (int t = 0; t < 4; ++t)
    CHECK_THAT(m0.matrix().coeff(t, t), Catch::Matchers::WithinRel(0.25, 1e-14));

  const Mesh mesh2 = build_crisscross(2);
  const SparseSymMatrix m1 = mass_matrix(mesh2, make_dofmap(mesh2, SpaceKind::p1dg));
  std::mt19937 rng(99);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(m1.dim());
    for (int i = 0; i < x.size(); ++i) x[i] = dist(rng);
    CHECK(m1.quadratic_form(x) > 0.0);
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m1.dim());
  CHECK_THAT(m1.quadratic_form(ones), Catch::Matchers::WithinRel(1.0, 1e-13));
}

TEST_CASE("element mass blocks invert cleanly") {
  const Mesh mesh = build_crisscross(2);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Matrix3d m = element_mass(mesh, t);
    const Eigen::Matrix3d id = m.inverse() * m;
    CHECK((id - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("l2_norm agrees with the mass quadratic form") {
  const Mesh mesh = build_crisscross(2);
  const DGFunction f = interpolate_nodal(mesh, sinsin);
  const SparseSymMatrix m = mass_matrix(mesh, f.map);
  CHECK_THAT(l2_norm(mesh, f),
             Catch::Matchers::WithinRel(std::sqrt(m.quadratic_form(f.coeffs)), 1e-12));
}
