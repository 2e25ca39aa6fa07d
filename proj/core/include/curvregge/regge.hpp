#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvregge/mesh.hpp"
#include "curvregge/metric.hpp"
#include "curvregge/quadrature.hpp"
#include "curvregge/types.hpp"

namespace curvregge {

/// Result of scanning a discrete metric for positive definiteness.
struct SpdReport {
  bool spd = true;
  double min_eigenvalue = 0.0;     ///< over all scanned points
  double max_eigenvalue = 0.0;
  int triangle = -1;               ///< location of the minimum
  Vec2 point = Vec2::Zero();
  int points_checked = 0;
};

/// Degree-r Regge finite element space: piecewise P_r symmetric-matrix
/// fields with tangential-tangential continuity across element interfaces.
///
/// Degrees of freedom are the values of tau^T sigma tau at the midpoints of
/// the subdivision-lattice sub-edges (tau the Euclidean unit tangent). The
/// per-element dual basis is solved from a monomial representation in
/// barycentric coordinates. Immutable after construction.
class ReggeSpace {
 public:
  ReggeSpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  const SubdivisionLattice& lattice() const { return lattice_; }
  int n_dofs() const { return lattice_.n_global(); }
  int n_local() const { return lattice_.per_triangle(); }

  /// Barycentric monomial exponents of the scalar P_r basis.
  const std::vector<std::array<int, 3>>& monomials() const { return mono_; }
  /// Dual-basis coefficients of triangle t: column e holds the coefficients
  /// of psi_e over (monomial, matrix-slot) pairs, slot-major per monomial.
  const MatX& dual_basis(int t) const { return basis_[t]; }

  /// Worst per-element condition number of the duality system.
  double max_condition() const { return max_condition_; }
  /// Worst deviation of the solved duality relations from the identity.
  double max_duality_residual() const { return max_duality_residual_; }

  /// Evaluate the local expansion (coefficients alpha over monomial/slot
  /// pairs) at a barycentric point of triangle t.
  Mat2 eval_local(int t, const VecX& alpha, const Vec3& bary) const;
  void eval_local_derivatives(int t, const VecX& alpha, const Vec3& bary, Mat2& value,
                              Mat2& ddx, Mat2& ddy) const;

  /// Dof functional applied to a matrix value at sub-edge g: the ratio
  /// (v^T F v)/(v^T v) with v the sub-edge direction (equals tau^T F tau).
  double dof_functional(int global_sub_edge, const Mat2& value) const;

 private:
  const Mesh* mesh_;
  int degree_;
  SubdivisionLattice lattice_;
  std::vector<std::array<int, 3>> mono_;
  std::vector<MatX> basis_;
  double max_condition_ = 0.0;
  double max_duality_residual_ = 0.0;
};

/// Member of a ReggeSpace: one coefficient per global sub-edge. The
/// per-element polynomial expansion is cached at construction, so evaluation
/// is concurrency-safe.
class ReggeFunction {
 public:
  ReggeFunction(const ReggeSpace& space, VecX dofs);

  const ReggeSpace& space() const { return *space_; }
  const VecX& dofs() const { return dofs_; }

  Mat2 value(int tri, const Vec3& bary) const;
  void value_and_derivatives(int tri, const Vec3& bary, Mat2& value, Mat2& ddx,
                             Mat2& ddy) const;

 private:
  const ReggeSpace* space_;
  VecX dofs_;
  std::vector<VecX> local_;  ///< cached per-element expansion coefficients
};

/// Subdivision-edge interpolant: coefficients tau^T g(z_e) tau at the
/// sub-edge midpoints. Reproduces any polynomial metric of degree <= r.
ReggeFunction interpolate_metric(const ReggeSpace& space, const MetricField& metric);

/// Pointwise evaluation (errors if the point lies outside the element).
Mat2 evaluate(const ReggeFunction& sigma, int tri, const Vec3& bary);

/// Scan sigma at the points of the given triangle rule on every element.
SpdReport check_spd(const ReggeFunction& sigma, const TriangleRule& rule);

/// View a ReggeFunction as a MetricField (per-element polynomial
/// differentiation supplies the derivatives).
class ReggeMetricField final : public MetricField {
 public:
  explicit ReggeMetricField(const ReggeFunction& f) : f_(&f) {}
  MetricValue eval(const Mesh&, int tri, const Vec3& bary, const Vec2&,
                   bool need_derivatives) const override;

 private:
  const ReggeFunction* f_;
};

/// Dof vector export/import, one line "edge_id,value" per global sub-edge.
void write_dof_csv(const std::string& path, const ReggeFunction& f);
VecX read_dof_csv(const std::string& path);

}  // namespace curvregge
