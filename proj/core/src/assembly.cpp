#include "curvregge/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "curvregge/parallel.hpp"

namespace curvregge {

namespace {

struct MetricAlgebra {
  Mat2 ginv;
  double det = 0.0;
  double sqrt_det = 0.0;
};

MetricAlgebra validated_algebra(const Mat2& g, int tri, const Vec2& world, double t) {
  if (!is_spd(g))
    throw SpdError("metric not positive definite at quadrature point (triangle " +
                       std::to_string(tri) + ")",
                   tri, world, t);
  MetricAlgebra a;
  a.det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  a.sqrt_det = std::sqrt(a.det);
  a.ginv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  a.ginv /= a.det;
  return a;
}

ChristoffelSymbols christoffel_from(const Mat2& ginv, const std::array<Mat2, 2>& dg) {
  ChristoffelSymbols c;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l)
          s += ginv(k, l) * (dg[j](l, i) + dg[i](l, j) - dg[l](i, j));
        c.gamma[k][i][j] = c.gamma[k][j][i] = 0.5 * s;
      }
  return c;
}

// Homotopy nodes (t, scale). A single node with blend=false assembles b_h at
// a fixed metric; Gauss-Legendre nodes with blend=true assemble the
// curvature right-hand side.
struct TNode {
  double t;
  double scale;
};

VecX assemble_form(const MetricField& g_end, const MetricField& sigma,
                   const LagrangeSpace& space, const QuadratureConfig& quad,
                   const std::vector<TNode>& t_nodes, bool blend) {
  const Mesh& mesh = space.mesh();
  const int nloc = space.n_local();
  const TriangleRule rule = TriangleRule::create(quad.tri_degree);
  const GaussRule edge_rule = gauss_legendre(quad.edge_points);

  std::vector<RefShapeData> ref(rule.size());
  for (int p = 0; p < rule.size(); ++p) ref[p] = space.eval_reference(rule.points[p]);

  auto metric_at = [&](const Mat2& g, double t) {
    return blend ? Mat2((1.0 - t) * Mat2::Identity() + t * g) : g;
  };
  auto label = [&](double t) { return blend ? t : -1.0; };

  // --- element terms: <S_G sigma, Hess_G v>_{G,K} ---------------------------
  std::vector<VecX> elem(mesh.n_triangles());
  parallel_for(mesh.n_triangles(), [&](std::int64_t ti) {
    const int t = static_cast<int>(ti);
    VecX local = VecX::Zero(nloc);
    std::vector<Vec2> grad(nloc);
    std::vector<Mat2> hess(nloc);
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      const Vec2 world = mesh.barycentric_to_world(t, bary);
      const double wx = rule.weights[p] * 2.0 * mesh.area(t);
      const MetricValue gv = g_end.eval(mesh, t, bary, world, true);
      const Mat2 sv = sigma.eval(mesh, t, bary, world, false).g;
      for (int i = 0; i < nloc; ++i) {
        grad[i] = space.physical_gradient(t, ref[p].gradients.row(i));
        hess[i] = space.physical_hessian(t, ref[p].hessians[i]);
      }
      for (const TNode& tn : t_nodes) {
        const Mat2 G = metric_at(gv.g, tn.t);
        const std::array<Mat2, 2> dG{(blend ? tn.t : 1.0) * gv.dg[0],
                                     (blend ? tn.t : 1.0) * gv.dg[1]};
        const MetricAlgebra alg = validated_algebra(G, t, world, label(tn.t));
        const ChristoffelSymbols gamma = christoffel_from(alg.ginv, dG);
        const Mat2 s_sigma = sv - G * (alg.ginv * sv).trace();
        const Mat2 a = alg.ginv * s_sigma * alg.ginv;
        const double w = tn.scale * wx * alg.sqrt_det;
        for (int i = 0; i < nloc; ++i) {
          const Mat2 hg = hessian_g(hess[i], grad[i], gamma);
          local(i) += w * a.cwiseProduct(hg).sum();
        }
      }
    }
    elem[t] = std::move(local);
  });

  // --- edge terms: tangential trace of sigma against the normal-derivative
  // jump, over all mesh edges (boundary edges take the single trace) --------
  struct EdgeLocal {
    std::array<VecX, 2> side;
  };
  std::vector<EdgeLocal> edge_contrib(mesh.n_edges());
  parallel_for(mesh.n_edges(), [&](std::int64_t ei) {
    const int e = static_cast<int>(ei);
    const Mesh::Edge& edge = mesh.edge(e);
    const int nsides = edge.boundary ? 1 : 2;
    const Vec2 v = mesh.edge_vector(e);
    const double vv = v.squaredNorm();
    const double elen = std::sqrt(vv);
    EdgeLocal out;
    for (int s = 0; s < nsides; ++s) out.side[s] = VecX::Zero(nloc);

    std::array<std::vector<Mat2>, 2> gval, sval;
    std::array<std::vector<std::vector<Vec2>>, 2> grads;
    std::array<int, 2> corner_a{}, corner_b{};
    for (int s = 0; s < nsides; ++s) {
      gval[s].resize(edge_rule.size());
      sval[s].resize(edge_rule.size());
      grads[s].assign(edge_rule.size(), std::vector<Vec2>(nloc));
      corner_a[s] = mesh.local_corner(edge.tris[s], edge.v[0]);
      corner_b[s] = mesh.local_corner(edge.tris[s], edge.v[1]);
    }
    const Vec2 pa = mesh.vertex(edge.v[0]);
    for (int p = 0; p < edge_rule.size(); ++p) {
      const double sp = edge_rule.points[p];
      const Vec2 world = pa + v * sp;
      for (int s = 0; s < nsides; ++s) {
        const int t = edge.tris[s];
        Vec3 bary = Vec3::Zero();
        bary[corner_a[s]] = 1.0 - sp;
        bary[corner_b[s]] = sp;
        gval[s][p] = g_end.eval(mesh, t, bary, world, false).g;
        sval[s][p] = sigma.eval(mesh, t, bary, world, false).g;
        const RefShapeData rs = space.eval_reference(Vec2(bary[1], bary[2]));
        for (int i = 0; i < nloc; ++i)
          grads[s][p][i] = space.physical_gradient(t, rs.gradients.row(i));
      }
    }

    for (const TNode& tn : t_nodes) {
      for (int p = 0; p < edge_rule.size(); ++p) {
        const double wq = edge_rule.weights[p] * elen * tn.scale;
        const Vec2 world = pa + v * edge_rule.points[p];
        // tangential-tangential data is single valued; average the sides to
        // keep the result symmetric under relabeling
        double wfac = 0.0;
        std::array<Vec2, 2> n_g;
        for (int s = 0; s < nsides; ++s) {
          const Mat2 G = metric_at(gval[s][p], tn.t);
          if (!is_spd(G))
            throw SpdError("metric not positive definite on edge " + std::to_string(e),
                           edge.tris[s], world, label(tn.t));
          const double vgv = v.dot(G * v);
          const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
          wfac += v.dot(sval[s][p] * v) / (elen * std::sqrt(vgv));
          n_g[s] = static_cast<double>(edge.orient[s]) * rotate_quarter(G * v) /
                   (std::sqrt(vgv) * std::sqrt(det));
        }
        wfac /= nsides;
        for (int s = 0; s < nsides; ++s)
          for (int i = 0; i < nloc; ++i)
            out.side[s](i) += wq * wfac * n_g[s].dot(grads[s][p][i]);
      }
    }
    edge_contrib[e] = std::move(out);
  });

  // --- serial scatter, fixed order ------------------------------------------
  VecX result = VecX::Zero(space.n_interior());
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int i = 0; i < nloc; ++i) {
      const int dof = space.interior_index(space.global_node(t, i));
      if (dof >= 0) result(dof) += elem[t](i);
    }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Mesh::Edge& edge = mesh.edge(e);
    const int nsides = edge.boundary ? 1 : 2;
    for (int s = 0; s < nsides; ++s)
      for (int i = 0; i < nloc; ++i) {
        const int dof = space.interior_index(space.global_node(edge.tris[s], i));
        if (dof >= 0) result(dof) += edge_contrib[e].side[s](i);
      }
  }
  return result;
}

std::vector<TNode> homotopy_nodes(int t_points) {
  const GaussRule rule = gauss_legendre(t_points);
  std::vector<TNode> nodes(rule.size());
  for (int k = 0; k < rule.size(); ++k)
    nodes[k] = {rule.points[k], 0.5 * rule.weights[k]};
  return nodes;
}

}  // namespace

VecX assemble_b_h(const MetricField& G, const MetricField& sigma, const LagrangeSpace& space,
                  const QuadratureConfig& quad, double t_label) {
  return assemble_form(G, sigma, space, quad, {{t_label, 1.0}}, false);
}

VecX assemble_curvature_rhs(const ReggeFunction& g_h, const LagrangeSpace& space,
                            const QuadratureConfig& quad) {
  // sigma = g_h - delta by exact coefficient subtraction: the identity's
  // interpolant has unit coefficients at every degree.
  const ReggeFunction sigma_h(g_h.space(),
                              g_h.dofs() - VecX::Ones(g_h.space().n_dofs()));
  const ReggeMetricField g_field(g_h);
  const ReggeMetricField sigma_field(sigma_h);
  return assemble_form(g_field, sigma_field, space, quad, homotopy_nodes(quad.t_points),
                       true);
}

VecX assemble_curvature_rhs(const MetricField& g, const LagrangeSpace& space,
                            const QuadratureConfig& quad) {
  // sigma = g - delta, evaluated through the endpoint field
  class Shifted final : public MetricField {
   public:
    explicit Shifted(const MetricField& base) : base_(base) {}
    MetricValue eval(const Mesh& mesh, int tri, const Vec3& bary, const Vec2& world,
                     bool need_derivatives) const override {
      MetricValue v = base_.eval(mesh, tri, bary, world, need_derivatives);
      v.g -= Mat2::Identity();
      return v;
    }

   private:
    const MetricField& base_;
  } shifted(g);
  return assemble_form(g, shifted, space, quad, homotopy_nodes(quad.t_points), true);
}

SparseMat assemble_mass_matrix(const MetricField& g, const LagrangeSpace& space,
                               const QuadratureConfig& quad, MassKind kind) {
  const Mesh& mesh = space.mesh();
  const int nloc = space.n_local();
  const TriangleRule rule = TriangleRule::create(quad.tri_degree);
  std::vector<RefShapeData> ref(rule.size());
  for (int p = 0; p < rule.size(); ++p) ref[p] = space.eval_reference(rule.points[p]);

  std::vector<MatX> elem(mesh.n_triangles());
  parallel_for(mesh.n_triangles(), [&](std::int64_t ti) {
    const int t = static_cast<int>(ti);
    MatX local = MatX::Zero(nloc, nloc);
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      const Vec2 world = mesh.barycentric_to_world(t, bary);
      const Mat2 gm = g.eval(mesh, t, bary, world, false).g;
      const MetricAlgebra alg = validated_algebra(gm, t, world, -1.0);
      const double w = rule.weights[p] * 2.0 * mesh.area(t) * alg.sqrt_det;
      local.noalias() += w * ref[p].values * ref[p].values.transpose();
    }
    elem[t] = std::move(local);
  });

  std::vector<Eigen::Triplet<double>> triplets;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int i = 0; i < nloc; ++i) {
      const int di = space.interior_index(space.global_node(t, i));
      if (di < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        const int dj = space.interior_index(space.global_node(t, j));
        if (dj >= 0) triplets.emplace_back(di, dj, elem[t](i, j));
      }
    }
  SparseMat m(space.n_interior(), space.n_interior());
  m.setFromTriplets(triplets.begin(), triplets.end());

  if (kind == MassKind::lumped) {
    const VecX row_sums = m * VecX::Ones(m.cols());
    SparseMat d(m.rows(), m.cols());
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) diag.emplace_back(i, i, row_sums(i));
    d.setFromTriplets(diag.begin(), diag.end());
    return d;
  }
  return m;
}

std::pair<VecX, SolverDiagnostics> solve_spd(const SparseMat& matrix, const VecX& rhs,
                                             double rel_tol, int max_iter) {
  const int n = static_cast<int>(rhs.size());
  if (matrix.rows() != n || matrix.cols() != n)
    throw SolverError("system dimensions do not match");
  SolverDiagnostics diag;
  if (n == 0) return {VecX(), diag};
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return {VecX::Zero(n), diag};
  if (max_iter < 0) max_iter = 10 * n + 100;

  VecX precond(n);
  for (int i = 0; i < n; ++i) {
    const double d = matrix.coeff(i, i);
    if (!(d > 0.0)) throw SolverError("matrix is not positive definite (diagonal)");
    precond(i) = 1.0 / d;
  }

  VecX x = VecX::Zero(n);
  VecX r = rhs;
  VecX z = precond.asDiagonal() * r;
  VecX p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    const VecX ap = matrix * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) throw SolverError("matrix is not positive definite (p^T A p <= 0)");
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    diag.iterations = it;
    if (r.norm() <= rel_tol * bnorm) break;
    if (it == max_iter)
      throw SolverError("conjugate gradients did not converge in " +
                        std::to_string(max_iter) + " iterations");
    z = precond.asDiagonal() * r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  diag.rel_residual = (rhs - matrix * x).norm() / bnorm;
  return {x, diag};
}

std::pair<VecX, SolverDiagnostics> solve_spd(const LinearSystem& system, double rel_tol,
                                             int max_iter) {
  return solve_spd(system.matrix, system.rhs, rel_tol, max_iter);
}

}  // namespace curvregge
