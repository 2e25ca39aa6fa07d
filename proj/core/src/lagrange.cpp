#include "curvregge/lagrange.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace curvregge {

namespace {

double int_pow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void check_point_in_triangle(const Vec3& bary) {
  const double tol = 1e-12;
  if (bary.minCoeff() < -tol || std::abs(bary.sum() - 1.0) > 1e-10)
    throw ConfigError("evaluation point lies outside the element");
}

}  // namespace

LagrangeSpace::LagrangeSpace(const Mesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree < 1 || degree > kMaxLagrangeDegree)
    throw ConfigError("Lagrange degree must be in {1,...," +
                      std::to_string(kMaxLagrangeDegree) + "}");
  const int q = degree;

  // Reference nodes: corners, then q-1 nodes per local edge (0,1),(1,2),(2,0)
  // ordered along the edge, then interior lattice nodes.
  ref_nodes_ = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  for (int k = 1; k < q; ++k) ref_nodes_.emplace_back(double(k) / q, 0.0);
  for (int k = 1; k < q; ++k) ref_nodes_.emplace_back(double(q - k) / q, double(k) / q);
  for (int k = 1; k < q; ++k) ref_nodes_.emplace_back(0.0, double(q - k) / q);
  for (int i = 1; i + 1 <= q - 1; ++i)
    for (int j = 1; i + j <= q - 1; ++j)
      ref_nodes_.emplace_back(double(i) / q, double(j) / q);

  for (int a = 0; a <= q; ++a)
    for (int b = 0; a + b <= q; ++b) mono_.push_back({a, b});

  const int nloc = n_local();
  MatX vand(nloc, nloc);
  for (int n = 0; n < nloc; ++n)
    for (int m = 0; m < nloc; ++m)
      vand(n, m) = int_pow(ref_nodes_[n].x(), mono_[m][0]) *
                   int_pow(ref_nodes_[n].y(), mono_[m][1]);
  coeff_ = vand.inverse();  // column i holds the monomial coefficients of phi_i

  // Global node numbering: mesh vertices, then (q-1) nodes per mesh edge
  // (ordered from the lower-indexed vertex), then interior nodes per triangle.
  const int nv = mesh.n_vertices();
  const int ne = mesh.n_edges();
  const int n_int_per_tri = (q - 1) * (q - 2) / 2;
  const int total = nv + ne * (q - 1) + mesh.n_triangles() * n_int_per_tri;
  node_xy_.resize(total);
  node_boundary_.assign(total, false);

  for (int v = 0; v < nv; ++v) {
    node_xy_[v] = mesh.vertex(v);
    node_boundary_[v] = mesh.vertex_on_boundary(v);
  }
  for (int e = 0; e < ne; ++e) {
    const Vec2 pa = mesh.vertex(mesh.edge(e).v[0]);
    const Vec2 dir = mesh.edge_vector(e);
    for (int k = 1; k < q; ++k) {
      const int n = nv + e * (q - 1) + (k - 1);
      node_xy_[n] = pa + dir * (double(k) / q);
      node_boundary_[n] = mesh.edge(e).boundary;
    }
  }

  local2global_.resize(mesh.n_triangles());
  const int interior_base = nv + ne * (q - 1);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto& map = local2global_[t];
    map.resize(nloc);
    const auto& tv = mesh.tri(t);
    map[0] = tv[0];
    map[1] = tv[1];
    map[2] = tv[2];
    int l = 3;
    const auto& te = mesh.tri_edges(t);
    const int local_edge_verts[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (int le = 0; le < 3; ++le) {
      const int ga = tv[local_edge_verts[le][0]];
      const int gb = tv[local_edge_verts[le][1]];
      for (int k = 1; k < q; ++k, ++l) {
        const int slot = (ga < gb) ? (k - 1) : (q - k - 1);
        map[l] = nv + te[le] * (q - 1) + slot;
      }
    }
    for (int k = 0; k < n_int_per_tri; ++k, ++l)
      map[l] = interior_base + t * n_int_per_tri + k;
    for (int k = 0; k < n_int_per_tri; ++k)
      node_xy_[interior_base + t * n_int_per_tri + k] = mesh.barycentric_to_world(
          t, Vec3(1.0 - ref_nodes_[nloc - n_int_per_tri + k].sum(),
                  ref_nodes_[nloc - n_int_per_tri + k].x(),
                  ref_nodes_[nloc - n_int_per_tri + k].y()));
  }

  interior_index_.assign(total, -1);
  for (int n = 0; n < total; ++n)
    if (!node_boundary_[n]) interior_index_[n] = n_interior_++;
}

RefShapeData LagrangeSpace::eval_reference(const Vec2& p) const {
  const int nloc = n_local();
  const int nm = static_cast<int>(mono_.size());
  VecX mv(nm), mdx(nm), mdy(nm), mdxx(nm), mdxy(nm), mdyy(nm);
  for (int m = 0; m < nm; ++m) {
    const int a = mono_[m][0], b = mono_[m][1];
    const double xa = int_pow(p.x(), a), yb = int_pow(p.y(), b);
    mv(m) = xa * yb;
    mdx(m) = a > 0 ? a * int_pow(p.x(), a - 1) * yb : 0.0;
    mdy(m) = b > 0 ? b * xa * int_pow(p.y(), b - 1) : 0.0;
    mdxx(m) = a > 1 ? a * (a - 1) * int_pow(p.x(), a - 2) * yb : 0.0;
    mdyy(m) = b > 1 ? b * (b - 1) * xa * int_pow(p.y(), b - 2) : 0.0;
    mdxy(m) = (a > 0 && b > 0)
                  ? a * b * int_pow(p.x(), a - 1) * int_pow(p.y(), b - 1)
                  : 0.0;
  }
  RefShapeData out;
  out.values = coeff_.transpose() * mv;
  out.gradients.resize(nloc, 2);
  out.gradients.col(0) = coeff_.transpose() * mdx;
  out.gradients.col(1) = coeff_.transpose() * mdy;
  const VecX hxx = coeff_.transpose() * mdxx;
  const VecX hxy = coeff_.transpose() * mdxy;
  const VecX hyy = coeff_.transpose() * mdyy;
  out.hessians.resize(nloc);
  for (int i = 0; i < nloc; ++i) {
    out.hessians[i] << hxx(i), hxy(i), hxy(i), hyy(i);
  }
  return out;
}

Vec2 LagrangeSpace::physical_gradient(int tri, const Eigen::RowVector2d& rg) const {
  const auto& gl = mesh_->barycentric_gradients(tri);
  return rg(0) * gl[1] + rg(1) * gl[2];
}

Mat2 LagrangeSpace::physical_hessian(int tri, const Mat2& rh) const {
  const auto& gl = mesh_->barycentric_gradients(tri);
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out += rh(a, b) * gl[a + 1] * gl[b + 1].transpose();
  return out;
}

LagrangeFunction::LagrangeFunction(const LagrangeSpace& space, VecX coefficients)
    : space_(&space), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space.n_interior())
    throw ConfigError("coefficient count does not match interior dof count");
}

LagrangeFunction LagrangeFunction::zero(const LagrangeSpace& space) {
  return LagrangeFunction(space, VecX::Zero(space.n_interior()));
}

double LagrangeFunction::node_value(int node) const {
  const int idx = space_->interior_index(node);
  return idx >= 0 ? coeffs_(idx) : 0.0;
}

double LagrangeFunction::value(int tri, const Vec3& bary) const {
  check_point_in_triangle(bary);
  const RefShapeData s = space_->eval_reference(Vec2(bary[1], bary[2]));
  double v = 0.0;
  for (int i = 0; i < space_->n_local(); ++i)
    v += s.values(i) * node_value(space_->global_node(tri, i));
  return v;
}

void LagrangeFunction::eval_with_derivatives(int tri, const Vec3& bary, double& value,
                                             Vec2& gradient, Mat2& hessian) const {
  check_point_in_triangle(bary);
  const RefShapeData s = space_->eval_reference(Vec2(bary[1], bary[2]));
  value = 0.0;
  Eigen::RowVector2d rg = Eigen::RowVector2d::Zero();
  Mat2 rh = Mat2::Zero();
  for (int i = 0; i < space_->n_local(); ++i) {
    const double c = node_value(space_->global_node(tri, i));
    if (c == 0.0) continue;
    value += c * s.values(i);
    rg += c * s.gradients.row(i);
    rh += c * s.hessians[i];
  }
  gradient = space_->physical_gradient(tri, rg);
  hessian = space_->physical_hessian(tri, rh);
}

double normal_derivative_jump(const LagrangeFunction& v, int edge, const MetricField& g,
                              double s) {
  const LagrangeSpace& space = v.space();
  const Mesh& mesh = space.mesh();
  const Mesh::Edge& e = mesh.edge(edge);
  const Vec2 pa = mesh.vertex(e.v[0]);
  const Vec2 world = pa + mesh.edge_vector(edge) * s;
  double jump = 0.0;
  for (int side = 0; side < 2; ++side) {
    const int t = e.tris[side];
    if (t < 0) continue;
    Vec3 bary = Vec3::Zero();
    const int la = mesh.local_corner(t, e.v[0]);
    const int lb = mesh.local_corner(t, e.v[1]);
    bary[la] = 1.0 - s;
    bary[lb] = s;
    const MetricValue mv = g.eval(mesh, t, bary, world, false);
    // outward tangent of this side, n_g built from it
    const Vec2 tau = static_cast<double>(e.orient[side]) * mesh.edge_vector(edge);
    const EdgeFrame frame = edge_frame(mv.g, tau);
    double val;
    Vec2 grad;
    Mat2 hess;
    v.eval_with_derivatives(t, bary, val, grad, hess);
    const Vec2 grad_g = spd_inverse(mv.g) * grad;
    jump += frame.n_g.dot(mv.g * grad_g);
  }
  return jump;
}

void write_nodal_csv(const std::string& path, const LagrangeFunction& u) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write nodal csv: " + path);
  out << "node_id,x,y,value\n";
  char buf[160];
  const LagrangeSpace& space = u.space();
  for (int n = 0; n < space.n_nodes(); ++n) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", n, space.node(n).x(),
                  space.node(n).y(), u.node_value(n));
    out << buf;
  }
}

}  // namespace curvregge
