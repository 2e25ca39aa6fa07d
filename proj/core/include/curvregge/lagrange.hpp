#pragma once

#include <string>
#include <vector>

#include "curvregge/mesh.hpp"
#include "curvregge/metric.hpp"
#include "curvregge/types.hpp"

namespace curvregge {

/// Shape function data at one reference point.
struct RefShapeData {
  VecX values;                ///< one per local node
  MatX gradients;             ///< n_local x 2, reference-coordinate gradients
  std::vector<Mat2> hessians; ///< reference-coordinate Hessians
};

/// Continuous degree-q nodal space with zero boundary trace.
///
/// Nodes are the principal lattice of each triangle (vertex, edge and
/// interior nodes); boundary nodes are excluded from the dof set, so every
/// member function vanishes identically on the domain boundary. Immutable
/// after construction.
class LagrangeSpace {
 public:
  LagrangeSpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int n_local() const { return static_cast<int>(ref_nodes_.size()); }

  int n_nodes() const { return static_cast<int>(node_xy_.size()); }
  int n_interior() const { return n_interior_; }
  const Vec2& node(int n) const { return node_xy_[n]; }
  bool node_on_boundary(int n) const { return node_boundary_[n]; }
  /// Dof index of a node, or -1 for boundary nodes.
  int interior_index(int n) const { return interior_index_[n]; }
  int global_node(int tri, int local) const { return local2global_[tri][local]; }
  /// Dof index of interior vertex v (nodes at vertices share the vertex id).
  int vertex_dof(int v) const { return interior_index_[v]; }

  /// Values/derivatives of all local shape functions at a reference point
  /// (xi, eta) = (lambda1, lambda2).
  RefShapeData eval_reference(const Vec2& ref_point) const;

  Vec2 physical_gradient(int tri, const Eigen::RowVector2d& ref_gradient) const;
  Mat2 physical_hessian(int tri, const Mat2& ref_hessian) const;

 private:
  const Mesh* mesh_;
  int degree_;
  // reference element
  std::vector<Vec2> ref_nodes_;
  std::vector<std::array<int, 2>> mono_;  ///< monomial exponents (a,b)
  MatX coeff_;                            ///< phi_i = sum_m coeff_(m,i) xi^a eta^b
  // global numbering
  std::vector<Vec2> node_xy_;
  std::vector<bool> node_boundary_;
  std::vector<int> interior_index_;
  int n_interior_ = 0;
  std::vector<std::vector<int>> local2global_;
};

/// Member of a LagrangeSpace: one coefficient per interior node.
class LagrangeFunction {
 public:
  LagrangeFunction(const LagrangeSpace& space, VecX coefficients);
  static LagrangeFunction zero(const LagrangeSpace& space);

  const LagrangeSpace& space() const { return *space_; }
  const VecX& coefficients() const { return coeffs_; }

  double value(int tri, const Vec3& bary) const;
  /// Value, Euclidean gradient, and Euclidean Hessian at a point of tri.
  void eval_with_derivatives(int tri, const Vec3& bary, double& value, Vec2& gradient,
                             Mat2& hessian) const;
  /// Coefficient of a node (0 for boundary nodes).
  double node_value(int node) const;

 private:
  const LagrangeSpace* space_;
  VecX coeffs_;
};

/// Sum of the one-sided g-normal derivatives of v across mesh edge e at the
/// point with parameter s in [0,1] along the edge (from the lower-indexed
/// vertex). Each side uses its own outward g-normal; boundary edges
/// contribute the single trace.
double normal_derivative_jump(const LagrangeFunction& v, int edge, const MetricField& g,
                              double s);

/// Nodal export, one line "node_id,x,y,value" per node (boundary nodes 0).
void write_nodal_csv(const std::string& path, const LagrangeFunction& u);

}  // namespace curvregge
