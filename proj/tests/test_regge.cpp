#include "doctest.h"

#include <cmath>
#include <random>

#include "curvregge/analysis.hpp"
#include "curvregge/mesh.hpp"
#include "curvregge/regge.hpp"
#include "support/oracles.hpp"

using namespace curvregge;

namespace {

Vec3 random_bary(std::mt19937_64& rng) {
  double a = oracles::unit_uniform(rng);
  double b = oracles::unit_uniform(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return Vec3(1.0 - a - b, a, b);
}

}  // namespace

TEST_SUITE("regge") {

TEST_CASE("dual basis satisfies the duality relations") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(2), 0.2, 17);
  for (int r : {0, 1, 2, 3}) {
    const ReggeSpace space(mesh, r);
    CHECK(space.max_duality_residual() < 1e-10);
    CHECK(space.max_condition() < 1e6);
    // explicit check on one element: psi_e evaluated through the dof
    // functional of e' gives the Kronecker delta
    const int t = 1;
    const auto& local = space.lattice().local[t];
    for (int e = 0; e < space.n_local(); ++e) {
      const VecX psi = space.dual_basis(t).col(e);
      for (int ep = 0; ep < space.n_local(); ++ep) {
        const Mat2 value = space.eval_local(t, psi, local[ep].bary_mid);
        const double functional = space.dof_functional(local[ep].global, value);
        CHECK(std::abs(functional - (e == ep ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("constant metrics are reproduced exactly at every degree") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 23);
  std::mt19937_64 rng(91);
  const Mat2 g = oracles::random_spd(rng);
  for (int r : {0, 1, 2, 3}) {
    const ReggeSpace space(mesh, r);
    const ReggeFunction g_h = interpolate_metric(space, ConstantMetric(g));
    for (int k = 0; k < 30; ++k) {
      const int t = static_cast<int>(rng() % mesh.n_triangles());
      const Mat2 v = g_h.value(t, random_bary(rng));
      CHECK((v - g).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("identity interpolates with exactly unit coefficients") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(2), 0.2, 29);
  for (int r : {0, 1, 2}) {
    const ReggeSpace space(mesh, r);
    const ReggeFunction id = interpolate_metric(space, ConstantMetric(Mat2::Identity()));
    for (int i = 0; i < id.dofs().size(); ++i) CHECK(id.dofs()(i) == 1.0);
  }
}

TEST_CASE("linear matrix fields are reproduced at degree 1") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 31);
  std::mt19937_64 rng(5);
  const Mat2 a = oracles::random_sym(rng), b = oracles::random_sym(rng),
             c = oracles::random_sym(rng);
  auto linear = [&](const Vec2& p) { return Mat2(a + p.x() * b + p.y() * c); };
  const AnalyticMetric field([&](const Vec2& p) {
    MetricValue v;
    v.g = linear(p);
    return v;
  });
  const ReggeSpace space(mesh, 1);
  const ReggeFunction s_h = interpolate_metric(space, field);
  for (int k = 0; k < 40; ++k) {
    const int t = static_cast<int>(rng() % mesh.n_triangles());
    const Vec3 bary = random_bary(rng);
    const Vec2 world = mesh.barycentric_to_world(t, bary);
    CHECK((s_h.value(t, bary) - linear(world)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("interpolation of the test metric converges at order r+1") {
  const QuadratureConfig quad;
  for (int r : {1, 2}) {
    std::vector<double> errors, hs;
    for (int n : {4, 8, 16}) {
      const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(n), 0.2, 42);
      const ReggeSpace space(mesh, r);
      const ReggeFunction g_h = interpolate_metric(space, *test_metric_field());
      errors.push_back(regge_l2_error(g_h, *test_metric_field(), quad));
      hs.push_back(mesh.h());
    }
    const double order = observed_order(hs[1], errors[1], hs[2], errors[2]);
    CHECK(order == doctest::Approx(r + 1.0).epsilon(0.12));
    CHECK(errors[2] < errors[1]);
    CHECK(errors[1] < errors[0]);
  }
}

TEST_CASE("evaluation matches an independent world-monomial reconstruction") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(2), 0.2, 37);
  std::mt19937_64 rng(11);
  for (int r : {0, 1, 2}) {
    const ReggeSpace space(mesh, r);
    VecX dofs(space.n_dofs());
    for (int i = 0; i < dofs.size(); ++i) dofs(i) = oracles::uniform(rng, -1.0, 2.0);
    const ReggeFunction f(space, dofs);
    for (int t : {0, 3, 5}) {
      const oracles::WorldMonomialRegge oracle(space, dofs, t);
      for (int k = 0; k < 20; ++k) {
        const Vec3 bary = random_bary(rng);
        const Vec2 world = mesh.barycentric_to_world(t, bary);
        CHECK((f.value(t, bary) - oracle.value(world)).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("degree 0 functions are piecewise constant and recover their dofs") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(2), 0.2, 41);
  const ReggeSpace space(mesh, 0);
  std::mt19937_64 rng(13);
  VecX dofs(space.n_dofs());
  for (int i = 0; i < dofs.size(); ++i) dofs(i) = oracles::uniform(rng, 0.5, 1.5);
  const ReggeFunction f(space, dofs);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Mat2 a = f.value(t, Vec3(1, 0, 0));
    const Mat2 b = f.value(t, random_bary(rng));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
  for (const auto& local : space.lattice().local)
    for (const auto& ls : local) {
      const Mat2 v = f.value(ls.global >= 0 ? space.lattice().sub_edges[ls.global].tris[0]
                                            : 0,
                             ls.bary_mid);
      CHECK(std::abs(space.dof_functional(ls.global, v) - dofs(ls.global)) < 1e-12);
    }
}

TEST_CASE("interpolation is a projection") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(2), 0.2, 43);
  std::mt19937_64 rng(17);
  for (int r : {0, 1, 2}) {
    const ReggeSpace space(mesh, r);
    VecX dofs(space.n_dofs());
    for (int i = 0; i < dofs.size(); ++i) dofs(i) = oracles::uniform(rng, -1.0, 2.0);
    const ReggeFunction f(space, dofs);
    const ReggeMetricField field(f);
    const ReggeFunction again = interpolate_metric(space, field);
    CHECK((again.dofs() - dofs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tangential-tangential continuity across interior edges") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 47);
  std::mt19937_64 rng(19);
  for (int r : {0, 1, 2}) {
    const ReggeSpace space(mesh, r);
    // arbitrary members of the space, not just interpolants
    VecX dofs(space.n_dofs());
    for (int i = 0; i < dofs.size(); ++i) dofs(i) = oracles::uniform(rng, -1.0, 2.0);
    const ReggeFunction f(space, dofs);
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const Mesh::Edge& edge = mesh.edge(e);
      if (edge.boundary) continue;
      const Vec2 tau = mesh.edge_vector(e).normalized();
      for (int k = 0; k < r + 3; ++k) {
        const double s = (k + 0.5) / (r + 3);
        double tt[2];
        for (int side = 0; side < 2; ++side) {
          const int t = edge.tris[side];
          Vec3 bary = Vec3::Zero();
          bary[mesh.local_corner(t, edge.v[0])] = 1.0 - s;
          bary[mesh.local_corner(t, edge.v[1])] = s;
          tt[side] = tau.dot(f.value(t, bary) * tau);
        }
        CHECK(std::abs(tt[0] - tt[1]) < 1e-10);
      }
    }
  }
}

TEST_CASE("spd scan accepts the test metric and flags corrupted dofs") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(4), 0.2, 53);
  const TriangleRule rule = TriangleRule::create(10);
  for (int r : {0, 1, 2}) {
    const ReggeSpace space(mesh, r);
    const ReggeFunction g_h = interpolate_metric(space, *test_metric_field());
    const SpdReport ok = check_spd(g_h, rule);
    CHECK(ok.spd);
    CHECK(ok.min_eigenvalue > 0.5);
    CHECK(ok.points_checked == mesh.n_triangles() * rule.size());

    const ReggeFunction id = interpolate_metric(space, ConstantMetric(Mat2::Identity()));
    const SpdReport unit = check_spd(id, rule);
    CHECK(unit.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-12));

    VecX bad = id.dofs();
    bad(space.n_dofs() / 2) = -1.0;
    const SpdReport corrupted = check_spd(ReggeFunction(space, bad), rule);
    CHECK_FALSE(corrupted.spd);
    CHECK(corrupted.triangle >= 0);
  }
}

TEST_CASE("out-of-element evaluation is rejected") {
  const Mesh mesh = build_uniform_square_mesh(2);
  const ReggeSpace space(mesh, 1);
  const ReggeFunction f = interpolate_metric(space, ConstantMetric(Mat2::Identity()));
  CHECK_THROWS_AS(f.value(0, Vec3(-0.2, 0.6, 0.6)), ConfigError);
}

TEST_CASE("dof csv round trip") {
  const Mesh mesh = build_uniform_square_mesh(2);
  const ReggeSpace space(mesh, 1);
  const ReggeFunction f = interpolate_metric(space, *test_metric_field());
  write_dof_csv("regge_dofs_test.csv", f);
  const VecX back = read_dof_csv("regge_dofs_test.csv");
  REQUIRE(back.size() == f.dofs().size());
  for (int i = 0; i < back.size(); ++i) CHECK(back(i) == f.dofs()(i));
  std::remove("regge_dofs_test.csv");
}

}  // TEST_SUITE
