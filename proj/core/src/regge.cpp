#include "curvregge/regge.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace curvregge {

namespace {

// Matrix slots spanning the symmetric 2x2 matrices.
const Mat2 kSlot[3] = {(Mat2() << 1, 0, 0, 0).finished(),
                       (Mat2() << 0, 0, 0, 1).finished(),
                       (Mat2() << 0, 1, 1, 0).finished()};

double mono_value(const std::array<int, 3>& a, const Vec3& lambda) {
  double v = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < a[i]; ++k) v *= lambda[i];
  return v;
}

void check_point_in_triangle(const Vec3& bary) {
  if (bary.minCoeff() < -1e-12 || std::abs(bary.sum() - 1.0) > 1e-10)
    throw ConfigError("evaluation point lies outside the element");
}

}  // namespace

ReggeSpace::ReggeSpace(const Mesh& mesh, int degree)
    : mesh_(&mesh), degree_(degree), lattice_(subdivision_lattice(mesh, degree)) {
  for (int a = degree; a >= 0; --a)
    for (int b = degree - a; b >= 0; --b) mono_.push_back({a, b, degree - a - b});

  const int nloc = n_local();
  const int dim = static_cast<int>(mono_.size()) * 3;
  if (dim != nloc) throw ConfigError("internal: lattice size mismatch");

  basis_.resize(mesh.n_triangles());
  double min_rcond = 1.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    MatX duality(nloc, dim);
    for (int e = 0; e < nloc; ++e) {
      const LocalSubEdge& ls = lattice_.local[t][e];
      const Vec2 v = lattice_.sub_edges[ls.global].direction;
      const double vv = v.squaredNorm();
      for (int m = 0; m < static_cast<int>(mono_.size()); ++m) {
        const double p = mono_value(mono_[m], ls.bary_mid);
        for (int j = 0; j < 3; ++j)
          duality(e, 3 * m + j) = p * v.dot(kSlot[j] * v) / vv;
      }
    }
    Eigen::PartialPivLU<MatX> lu(duality);
    const double rc = lu.rcond();
    if (!(rc > 1e-14))
      throw ConfigError("singular Regge duality system (degenerate triangle " +
                        std::to_string(t) + ")");
    min_rcond = std::min(min_rcond, rc);
    basis_[t] = lu.solve(MatX::Identity(nloc, nloc));
    const double res = (duality * basis_[t] - MatX::Identity(nloc, nloc))
                           .cwiseAbs()
                           .maxCoeff();
    max_duality_residual_ = std::max(max_duality_residual_, res);
  }
  max_condition_ = 1.0 / min_rcond;
}

double ReggeSpace::dof_functional(int global_sub_edge, const Mat2& value) const {
  const Vec2 v = lattice_.sub_edges[global_sub_edge].direction;
  return v.dot(value * v) / v.squaredNorm();
}

Mat2 ReggeSpace::eval_local(int t, const VecX& alpha, const Vec3& bary) const {
  (void)t;
  Mat2 out = Mat2::Zero();
  for (int m = 0; m < static_cast<int>(mono_.size()); ++m) {
    const double p = mono_value(mono_[m], bary);
    if (p == 0.0) continue;
    out += p * (alpha(3 * m + 0) * kSlot[0] + alpha(3 * m + 1) * kSlot[1] +
                alpha(3 * m + 2) * kSlot[2]);
  }
  return out;
}

void ReggeSpace::eval_local_derivatives(int t, const VecX& alpha, const Vec3& bary,
                                        Mat2& value, Mat2& ddx, Mat2& ddy) const {
  value = ddx = ddy = Mat2::Zero();
  const auto& dl = mesh_->barycentric_gradients(t);
  for (int m = 0; m < static_cast<int>(mono_.size()); ++m) {
    const auto& a = mono_[m];
    const double p = mono_value(a, bary);
    Vec2 dp = Vec2::Zero();  // gradient of the monomial via the chain rule
    for (int i = 0; i < 3; ++i) {
      if (a[i] == 0) continue;
      auto red = a;
      red[i] -= 1;
      dp += a[i] * mono_value(red, bary) * dl[i];
    }
    const Mat2 slot = alpha(3 * m + 0) * kSlot[0] + alpha(3 * m + 1) * kSlot[1] +
                      alpha(3 * m + 2) * kSlot[2];
    value += p * slot;
    ddx += dp.x() * slot;
    ddy += dp.y() * slot;
  }
}

ReggeFunction::ReggeFunction(const ReggeSpace& space, VecX dofs)
    : space_(&space), dofs_(std::move(dofs)) {
  if (dofs_.size() != space.n_dofs())
    throw ConfigError("dof count does not match the Regge space");
  const auto& lat = space.lattice();
  local_.resize(space.mesh().n_triangles());
  for (int t = 0; t < space.mesh().n_triangles(); ++t) {
    VecX ld(space.n_local());
    for (int e = 0; e < space.n_local(); ++e) ld(e) = dofs_(lat.local[t][e].global);
    local_[t] = space.dual_basis(t) * ld;
  }
}

Mat2 ReggeFunction::value(int tri, const Vec3& bary) const {
  check_point_in_triangle(bary);
  return space_->eval_local(tri, local_[tri], bary);
}

void ReggeFunction::value_and_derivatives(int tri, const Vec3& bary, Mat2& value,
                                          Mat2& ddx, Mat2& ddy) const {
  check_point_in_triangle(bary);
  space_->eval_local_derivatives(tri, local_[tri], bary, value, ddx, ddy);
}

ReggeFunction interpolate_metric(const ReggeSpace& space, const MetricField& metric) {
  const auto& lat = space.lattice();
  VecX dofs(space.n_dofs());
  std::vector<bool> done(space.n_dofs(), false);
  for (int t = 0; t < space.mesh().n_triangles(); ++t) {
    for (const LocalSubEdge& ls : lat.local[t]) {
      if (done[ls.global]) continue;
      const Mat2 g =
          metric.eval(space.mesh(), t, ls.bary_mid, lat.sub_edges[ls.global].midpoint, false)
              .g;
      dofs(ls.global) = space.dof_functional(ls.global, g);
      done[ls.global] = true;
    }
  }
  return ReggeFunction(space, std::move(dofs));
}

Mat2 evaluate(const ReggeFunction& sigma, int tri, const Vec3& bary) {
  return sigma.value(tri, bary);
}

SpdReport check_spd(const ReggeFunction& sigma, const TriangleRule& rule) {
  SpdReport report;
  report.min_eigenvalue = std::numeric_limits<double>::max();
  report.max_eigenvalue = std::numeric_limits<double>::lowest();
  const Mesh& mesh = sigma.space().mesh();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      const auto [lo, hi] = sym_eigenvalues(sigma.value(t, bary));
      report.max_eigenvalue = std::max(report.max_eigenvalue, hi);
      if (lo < report.min_eigenvalue) {
        report.min_eigenvalue = lo;
        report.triangle = t;
        report.point = mesh.barycentric_to_world(t, bary);
      }
      ++report.points_checked;
    }
  }
  report.spd = report.max_eigenvalue > 0.0 &&
               report.min_eigenvalue > 1e-12 * report.max_eigenvalue;
  return report;
}

MetricValue ReggeMetricField::eval(const Mesh&, int tri, const Vec3& bary, const Vec2&,
                                   bool need_derivatives) const {
  MetricValue v;
  if (need_derivatives) {
    f_->value_and_derivatives(tri, bary, v.g, v.dg[0], v.dg[1]);
    v.has_derivatives = true;
  } else {
    v.g = f_->value(tri, bary);
  }
  return v;
}

void write_dof_csv(const std::string& path, const ReggeFunction& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dof csv: " + path);
  out << "edge_id,value\n";
  char buf[64];
  for (int i = 0; i < f.dofs().size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", i, f.dofs()(i));
    out << buf;
  }
}

VecX read_dof_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dof csv: " + path);
  std::string line;
  std::getline(in, line);
  if (line != "edge_id,value") throw ConfigError("bad dof csv header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("bad dof csv line: " + line);
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return Eigen::Map<VecX>(values.data(), static_cast<int>(values.size()));
}

}  // namespace curvregge
