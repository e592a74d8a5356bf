#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dwdg/forms.hpp"

using namespace dwdg;

namespace {

const double kPi = std::acos(-1.0);
double sinsin(double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

struct Assembly {
  Mesh mesh;
  LiftingSet lifting;
  PenaltyConfig penalty;
  SparseSymMatrix a;
};

Assembly make_assembly(int n, double gamma) {
  Assembly out{build_crisscross(n), {}, PenaltyConfig{gamma}, {}};
  out.lifting = build_lifting(out.mesh, make_dofmap(out.mesh, SpaceKind::p1dg), true);
  out.a = assemble_ah(out.mesh, out.lifting, out.penalty);
  return out;
}

}  // namespace

TEST_CASE("a_h requires the boundary-zero lifting") {
  const Mesh mesh = build_crisscross(1);
  const LiftingSet nobc = build_lifting(mesh, make_dofmap(mesh, SpaceKind::p1dg), false);
  CHECK_THROWS_AS(assemble_ah(mesh, nobc, PenaltyConfig{0.0}), std::invalid_argument);
}

TEST_CASE("a_h is numerically symmetric at every tested level and gamma") {
  for (int n : {1, 2, 4}) {
    for (double gamma : {-1.0, 0.0, 5.0}) {
      const Assembly as = make_assembly(n, gamma);
      CHECK(as.a.symmetry_defect() <= 1e-12);
    }
  }
}

TEST_CASE("energy identity: v' A v = |||v|||^2 for random v") {
  std::mt19937 rng(11);
  for (double gamma : {0.0, 5.0}) {
    const Assembly as = make_assembly(2, gamma);
    for (int trial = 0; trial < 20; ++trial) {
      DGFunction v(make_dofmap(as.mesh, SpaceKind::p1dg),
                   random_vector(3 * as.mesh.num_triangles(), rng));
      const double quad = as.a.quadratic_form(v.coeffs);
      const double nrm = energy_norm(as.mesh, v, as.lifting, as.penalty);
      CHECK_THAT(nrm * nrm, Catch::Matchers::WithinRel(quad, 1e-11));
    }
  }
}

TEST_CASE("gamma=0, N=1: the 12x12 matrix is symmetric positive definite") {
  const Assembly as = make_assembly(1, 0.0);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(as.a.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  REQUIRE(es.info() == Eigen::Success);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("penalty part alone is positive semidefinite for gamma=5") {
  const Mesh mesh = build_crisscross(2);
  const SparseSymMatrix p = penalty_matrix(mesh, PenaltyConfig{5.0});
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd v = random_vector(p.dim(), rng);
    CHECK(p.quadratic_form(v) >= -1e-12);
  }
}

TEST_CASE("load vector: zero, partition of unity, degree-9 oracle") {
  const Mesh mesh = build_crisscross(2);
  const DofMap map = make_dofmap(mesh, SpaceKind::p1dg);
  const Eigen::VectorXd z = load_vector(mesh, [](double, double) { return 0.0; }, map);
  CHECK(z.norm() == 0.0);

  const Eigen::VectorXd ones = load_vector(mesh, [](double, double) { return 1.0; }, map);
  CHECK_THAT(ones.sum(), Catch::Matchers::WithinRel(1.0, 1e-13));

  // desired-state load against an independent degree-9 collapsed product rule
  const auto yd = [](double x, double y) {
    return (1.0 + 4.0 * kPi * kPi * kPi * kPi) * sinsin(x, y);
  };
  const Eigen::VectorXd b = load_vector(mesh, yd, map, 7);
  const EdgeRule& g9 = detail::gauss01(9);
  Eigen::VectorXd oracle = Eigen::VectorXd::Zero(map.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto pts = mesh.triangle_points(t);
    for (std::size_t i = 0; i < g9.points.size(); ++i) {
      for (std::size_t j = 0; j < g9.points.size(); ++j) {
        const double u = g9.points[i];
        const double v = g9.points[j] * (1.0 - u);
        const double w = g9.weights[i] * g9.weights[j] * (1.0 - u);
        const std::array<double, 3> lam = {1.0 - u - v, u, v};
        const Point x = lam[0] * pts[0] + lam[1] * pts[1] + lam[2] * pts[2];
        for (int r = 0; r < 3; ++r)
          oracle[3 * t + r] += 2.0 * mesh.area(t) * w * yd(x.x, x.y) * lam[r];
      }
    }
  }
  CHECK((b - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("energy norm: zero function, negative-penalty guard") {
  const Assembly as = make_assembly(2, -1.0);
  DGFunction zero(make_dofmap(as.mesh, SpaceKind::p1dg));
  CHECK(energy_norm(as.mesh, zero, as.lifting, as.penalty) == 0.0);

  // gamma = -1 stays positive on random functions at every tested level:
  // the jump constant of this mesh family exceeds one
  std::mt19937 rng(17);
  for (int n : {1, 2, 4, 8}) {
    const Assembly a2 = make_assembly(n, -1.0);
    for (int trial = 0; trial < 10; ++trial) {
      DGFunction v(make_dofmap(a2.mesh, SpaceKind::p1dg),
                   random_vector(3 * a2.mesh.num_triangles(), rng));
      CHECK(energy_norm(a2.mesh, v, a2.lifting, a2.penalty) > 0.0);
    }
  }

  // a strongly negative penalty is rejected rather than returning NaN
  const Assembly bad = make_assembly(2, -50.0);
  DGFunction v(make_dofmap(bad.mesh, SpaceKind::p1dg),
               random_vector(3 * bad.mesh.num_triangles(), rng));
  CHECK_THROWS_AS(energy_norm(bad.mesh, v, bad.lifting, bad.penalty), InvalidPenaltyError);
}

TEST_CASE("discrete Poincare: L2 over energy ratio stays bounded across levels") {
  std::mt19937 rng(23);
  for (double gamma : {0.0, 5.0}) {
    const auto max_ratio = [&](int n) {
      const Assembly as = make_assembly(n, gamma);
      double worst = 0.0;
      for (int trial = 0; trial < 50; ++trial) {
        DGFunction v(make_dofmap(as.mesh, SpaceKind::p1dg),
                     random_vector(3 * as.mesh.num_triangles(), rng));
        const double l2 = l2_norm(as.mesh, v);
        const double en = energy_norm(as.mesh, v, as.lifting, as.penalty);
        worst = std::max(worst, l2 * l2 / (en * en));
      }
      return worst;
    };
    const double coarse = max_ratio(2);
    const double fine = max_ratio(16);
    CHECK(fine <= 2.0 * coarse);
  }
}

TEST_CASE("broken gradient controlled by the energy norm for gamma=5") {
  std::mt19937 rng(29);
  const auto max_ratio = [&](int n) {
    const Assembly as = make_assembly(n, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      DGFunction v(make_dofmap(as.mesh, SpaceKind::p1dg),
                   random_vector(3 * as.mesh.num_triangles(), rng));
      double broken = 0.0;
      for (int t = 0; t < as.mesh.num_triangles(); ++t) {
        Point g{0.0, 0.0};
        for (int j = 0; j < 3; ++j) g = g + v.coeffs[3 * t + j] * as.mesh.basis_gradient(t, j);
        broken += as.mesh.area(t) * dot(g, g);
      }
      const double en = energy_norm(as.mesh, v, as.lifting, as.penalty);
      worst = std::max(worst, broken / (en * en));
    }
    return worst;
  };
  const double coarse = max_ratio(2);
  const double fine = max_ratio(16);
  CHECK(fine <= 2.0 * coarse);
}

TEST_CASE("jump bound: gamma_min sum h^-1 ||[v]||^2 <= |||v|||^2 for gamma=5") {
  std::mt19937 rng(31);
  const Assembly as = make_assembly(4, 5.0);
  const SparseSymMatrix pen_unit = penalty_matrix(as.mesh, PenaltyConfig{1.0});
  for (int trial = 0; trial < 50; ++trial) {
    DGFunction v(make_dofmap(as.mesh, SpaceKind::p1dg),
                 random_vector(3 * as.mesh.num_triangles(), rng));
    const double jumps = pen_unit.quadratic_form(v.coeffs);  // sum h^-1 ||[v]||^2
    const double en = energy_norm(as.mesh, v, as.lifting, as.penalty);
    CHECK(5.0 * jumps <= en * en * (1.0 + 1e-12));
  }
}

TEST_CASE("error_energy with exact = 0 reduces to the energy norm") {
  std::mt19937 rng(37);
  const Assembly as = make_assembly(2, 5.0);
  const AnalyticFunction zero{[](double, double) { return 0.0; },
                              [](double, double) { return Point{0.0, 0.0}; }};
  for (int trial = 0; trial < 5; ++trial) {
    DGFunction v(make_dofmap(as.mesh, SpaceKind::p1dg),
                 random_vector(3 * as.mesh.num_triangles(), rng));
    CHECK_THAT(error_energy(as.mesh, zero, v, as.lifting, as.penalty),
               Catch::Matchers::WithinRel(energy_norm(as.mesh, v, as.lifting, as.penalty),
                                          1e-10));
  }
}

TEST_CASE("interpolant energy error decays at first order") {
  const AnalyticFunction exact{sinsin, [](double x, double y) {
                                 return Point{kPi * std::cos(kPi * x) * std::sin(kPi * y),
                                              kPi * std::sin(kPi * x) * std::cos(kPi * y)};
                               }};
  const auto err = [&](int n) {
    const Assembly as = make_assembly(n, 0.0);
    const DGFunction iy = interpolate_nodal(as.mesh, sinsin);
    return error_energy(as.mesh, exact, iy, as.lifting, as.penalty);
  };
  const double rate = std::log2(err(4) / err(32)) / 3.0;
  CHECK_THAT(rate, Catch::Matchers::WithinAbs(1.0, 0.1));
}

TEST_CASE("error_l2: exact zero against zero function") {
  const Mesh mesh = build_crisscross(2);
  DGFunction zero(make_dofmap(mesh, SpaceKind::p1dg));
  CHECK(error_l2(mesh, [](double, double) { return 0.0; }, zero) == 0.0);
}
