#include "doctest.h"

#include <cmath>
#include <random>

#include "curvregge/assembly.hpp"
#include "curvregge/curvature.hpp"
#include "curvregge/mesh.hpp"
#include "support/oracles.hpp"

using namespace curvregge;

namespace {

// integral of every interior basis function against a scalar weight
VecX integrate_basis(const LagrangeSpace& space, const QuadratureConfig& quad,
                     const std::function<double(int, const Vec3&, const Vec2&)>& weight) {
  const Mesh& mesh = space.mesh();
  const TriangleRule rule = TriangleRule::create(quad.tri_degree);
  VecX out = VecX::Zero(space.n_interior());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      const Vec2 world = mesh.barycentric_to_world(t, bary);
      const RefShapeData s = space.eval_reference(rule.points[p]);
      const double w = rule.weights[p] * 2.0 * mesh.area(t) * weight(t, bary, world);
      for (int i = 0; i < space.n_local(); ++i) {
        const int dof = space.interior_index(space.global_node(t, i));
        if (dof >= 0) out(dof) += w * s.values(i);
      }
    }
  }
  return out;
}

const AnalyticMetric kEuclidean([](const Vec2&) {
  MetricValue v;
  v.has_derivatives = true;
  return v;
});

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("b_h is bilinear in sigma") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 21);
  const LagrangeSpace space(mesh, 2);
  const ReggeSpace regge(mesh, 1);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  std::mt19937_64 rng(33);
  VecX d1(regge.n_dofs()), d2(regge.n_dofs());
  for (int i = 0; i < d1.size(); ++i) {
    d1(i) = oracles::uniform(rng, -1, 1);
    d2(i) = oracles::uniform(rng, -1, 1);
  }
  const double alpha = 0.7, beta = -1.3;
  const ReggeFunction s1(regge, d1), s2(regge, d2);
  const ReggeFunction combo(regge, alpha * d1 + beta * d2);
  const ReggeMetricField gf(g_h), f1(s1), f2(s2), fc(combo);
  const QuadratureConfig quad;
  const VecX b1 = assemble_b_h(gf, f1, space, quad);
  const VecX b2 = assemble_b_h(gf, f2, space, quad);
  const VecX bc = assemble_b_h(gf, fc, space, quad);
  const double scale = bc.cwiseAbs().maxCoeff();
  CHECK((bc - alpha * b1 - beta * b2).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, scale));
}

TEST_CASE("zero sigma assembles to exactly zero") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 27);
  const LagrangeSpace space(mesh, 1);
  const ConstantMetric zero(Mat2::Zero());
  const VecX b = assemble_b_h(kEuclidean, zero, space, QuadratureConfig{});
  for (int i = 0; i < b.size(); ++i) CHECK(b(i) == 0.0);
}

TEST_CASE("flat identity data produces vanishing rows") {
  // G = delta, sigma = delta, q = 1: element terms vanish and the edge terms
  // sum to the (zero) flat angle defect at interior vertices
  for (std::uint64_t seed : {0ull, 42ull}) {
    const Mesh mesh =
        perturb_interior_vertices(build_uniform_square_mesh(4), seed ? 0.2 : 0.0, seed);
    const LagrangeSpace space(mesh, 1);
    const ConstantMetric id(Mat2::Identity());
    const VecX b = assemble_b_h(kEuclidean, id, space, QuadratureConfig{});
    CHECK(b.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("b_h against the div-div closed form") {
  // sigma = [[0,0],[0,x^2]] and G = delta: rows must equal -2 * integral(phi)
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(8), 0.2, 42);
  const AnalyticMetric sigma([](const Vec2& p) {
    MetricValue v;
    v.g << 0.0, 0.0, 0.0, p.x() * p.x();
    return v;
  });
  const QuadratureConfig quad;
  for (int q : {1, 2}) {
    const LagrangeSpace space(mesh, q);
    const VecX b = assemble_b_h(kEuclidean, sigma, space, quad);
    const VecX expected =
        -2.0 * integrate_basis(space, quad,
                               [](int, const Vec3&, const Vec2&) { return 1.0; });
    CHECK((b - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("spd violations are reported with a location") {
  const Mesh mesh = build_uniform_square_mesh(2);
  const LagrangeSpace space(mesh, 1);
  Mat2 indefinite;
  indefinite << 1.0, 2.0, 2.0, 1.0;
  const ConstantMetric bad(indefinite);
  const ConstantMetric sigma(Mat2::Identity());
  CHECK_THROWS_AS(assemble_b_h(bad, sigma, space, QuadratureConfig{}), SpdError);
}

TEST_CASE("curvature rhs of the flat interpolants") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 51);
  const QuadratureConfig quad;
  for (int r : {0, 1, 2}) {
    const ReggeSpace regge(mesh, r);
    for (int q : {1, 2}) {
      const LagrangeSpace space(mesh, q);
      // identity: sigma has exactly zero coefficients, rhs is exactly zero
      const ReggeFunction id = interpolate_metric(regge, ConstantMetric(Mat2::Identity()));
      const VecX rhs_id = assemble_curvature_rhs(id, space, quad);
      for (int i = 0; i < rhs_id.size(); ++i) CHECK(rhs_id(i) == 0.0);

      // any constant metric is flat
      const ReggeFunction scaled =
          interpolate_metric(regge, ConstantMetric(2.5 * Mat2::Identity()));
      CHECK(assemble_curvature_rhs(scaled, space, quad).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("degree-0 curvature rhs equals the law-of-cosines angle defect") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(4), 0.2, 61);
  const ReggeSpace regge(mesh, 0);
  const LagrangeSpace space(mesh, 1);
  std::mt19937_64 rng(55);
  VecX dofs(regge.n_dofs());
  for (int i = 0; i < dofs.size(); ++i) dofs(i) = 1.0 + oracles::uniform(rng, -0.3, 0.3);
  const ReggeFunction g_h(regge, dofs);
  REQUIRE(check_spd(g_h, TriangleRule::create(0)).spd);
  const VecX rhs = assemble_curvature_rhs(g_h, space, QuadratureConfig{});
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int dof = space.vertex_dof(v);
    if (dof < 0) continue;
    CHECK(rhs(dof) == doctest::Approx(angle_defect(g_h, v)).epsilon(1e-10));
  }
}

TEST_CASE("mass matrix entries for hat functions") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(4), 0.2, 71);
  const LagrangeSpace space(mesh, 1);
  const QuadratureConfig quad;
  const SparseMat m = assemble_mass_matrix(kEuclidean, space, quad);
  // exact integration oracle: int phi_i phi_j = A/12 per shared element,
  // int phi_i^2 = A/6 per incident element
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int dof = space.vertex_dof(v);
    if (dof < 0) continue;
    double diag = 0.0;
    for (int t : vertex_star(mesh, v).triangles) diag += mesh.area(t) / 6.0;
    CHECK(m.coeff(dof, dof) == doctest::Approx(diag).epsilon(1e-13));
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Mesh::Edge& edge = mesh.edge(e);
    const int di = space.vertex_dof(edge.v[0]);
    const int dj = space.vertex_dof(edge.v[1]);
    if (di < 0 || dj < 0) continue;
    double offdiag = 0.0;
    for (int s = 0; s < 2; ++s)
      if (edge.tris[s] >= 0) offdiag += mesh.area(edge.tris[s]) / 12.0;
    CHECK(m.coeff(di, dj) == doctest::Approx(offdiag).epsilon(1e-13));
  }
}

TEST_CASE("lumping and scaling identities") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(3), 0.2, 81);
  const LagrangeSpace space(mesh, 2);
  const QuadratureConfig quad;
  const SparseMat consistent = assemble_mass_matrix(kEuclidean, space, quad);
  const SparseMat lumped =
      assemble_mass_matrix(kEuclidean, space, quad, MassKind::lumped);
  const VecX ones = VecX::Ones(consistent.cols());
  CHECK(((consistent * ones) - (lumped * ones)).cwiseAbs().maxCoeff() < 1e-14);
  for (int i = 0; i < lumped.outerSize(); ++i)
    for (SparseMat::InnerIterator it(lumped, i); it; ++it)
      CHECK(it.row() == it.col());

  // conformal scaling g = c*delta multiplies every entry by sqrt(det) = c
  const ConstantMetric two(2.0 * Mat2::Identity());
  const SparseMat doubled = assemble_mass_matrix(two, space, quad);
  const ConstantMetric four(4.0 * Mat2::Identity());
  const SparseMat quadrupled = assemble_mass_matrix(four, space, quad);
  for (int i = 0; i < consistent.outerSize(); ++i)
    for (SparseMat::InnerIterator it(consistent, i); it; ++it) {
      CHECK(doubled.coeff(it.row(), it.col()) ==
            doctest::Approx(2.0 * it.value()).epsilon(1e-14));
      CHECK(quadrupled.coeff(it.row(), it.col()) ==
            doctest::Approx(4.0 * it.value()).epsilon(1e-14));
    }
}

TEST_CASE("conjugate gradient solver") {
  // identity system returns the rhs
  SparseMat eye(3, 3);
  eye.setIdentity();
  const VecX b = (VecX(3) << 1.0, -2.0, 0.5).finished();
  auto [x, diag] = solve_spd(eye, b);
  CHECK((x - b).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(diag.rel_residual <= 1e-12);

  // 2x2 system with a hand inverse: A = [[2,1],[1,3]], A^{-1} = [[3,-1],[-1,2]]/5
  SparseMat a(2, 2);
  a.insert(0, 0) = 2.0;
  a.insert(0, 1) = 1.0;
  a.insert(1, 0) = 1.0;
  a.insert(1, 1) = 3.0;
  a.makeCompressed();
  VecX rhs(2);
  rhs << 1.0, 2.0;
  auto [y, d2] = solve_spd(a, rhs);
  VecX exact(2);
  exact << (3.0 * 1 - 1 * 2) / 5.0, (-1.0 * 1 + 2 * 2) / 5.0;
  CHECK((y - exact).cwiseAbs().maxCoeff() < 1e-14);

  // zero rhs short-circuits
  auto [z, d3] = solve_spd(a, VecX::Zero(2));
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);

  // indefinite matrix is detected
  SparseMat ind(2, 2);
  ind.insert(0, 0) = 1.0;
  ind.insert(1, 1) = -1.0;
  ind.makeCompressed();
  CHECK_THROWS_AS(solve_spd(ind, rhs), SolverError);

  // unreachable tolerance within one iteration is a convergence failure
  CHECK_THROWS_AS(solve_spd(a, rhs, 1e-30, 1), SolverError);
}

TEST_CASE("mass system is consistent with the partition of unity") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(6), 0.2, 91);
  const LagrangeSpace space(mesh, 1);
  const QuadratureConfig quad;
  const ReggeSpace regge(mesh, 1);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  const ReggeMetricField g(g_h);
  const SparseMat m = assemble_mass_matrix(g, space, quad);
  const VecX row_sums = m * VecX::Ones(m.cols());
  // load vector of the same discrete volume form the mass matrix uses
  const VecX loads = integrate_basis(space, quad, [&](int t, const Vec3& bary, const Vec2&) {
    return std::sqrt(g_h.value(t, bary).determinant());
  });
  // away from the boundary the interior hats alone sum to one
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int dof = space.vertex_dof(v);
    if (dof < 0) continue;
    bool deep = true;
    for (int t : vertex_star(mesh, v).triangles)
      for (int w : mesh.tri(t))
        if (mesh.vertex_on_boundary(w)) deep = false;
    if (deep) CHECK(std::abs(row_sums(dof) - loads(dof)) < 1e-13);
  }
  // and solving against the row sums returns exactly ones
  auto [x, diag] = solve_spd(m, row_sums);
  CHECK((x - VecX::Ones(x.size())).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("homotopy rhs of the analytic metric matches direct curvature quadrature") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(8), 0.2, 42);
  const LagrangeSpace space(mesh, 1);
  const QuadratureConfig quad;
  const VecX rhs = assemble_curvature_rhs(*test_metric_field(), space, quad);
  const VecX direct = integrate_basis(space, quad, [](int, const Vec3&, const Vec2& p) {
    return exact_test_curvature(p.x(), p.y()) *
           std::sqrt(eval_test_metric(p.x(), p.y()).g.determinant());
  });
  CHECK((rhs - direct).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("doubling the quadrature barely moves an already-exact assembly") {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(4), 0.2, 99);
  const LagrangeSpace space(mesh, 2);
  const AnalyticMetric sigma([](const Vec2& p) {
    MetricValue v;
    v.g << 0.0, 0.0, 0.0, p.x() * p.x();
    return v;
  });
  const QuadratureConfig quad;
  const VecX base = assemble_b_h(kEuclidean, sigma, space, quad);
  const VecX fine = assemble_b_h(kEuclidean, sigma, space, quad.doubled());
  CHECK((base - fine).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
