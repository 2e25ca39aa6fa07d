#pragma once

#include <string>
#include <vector>

#include "curvregge/types.hpp"

namespace curvregge {

/// Quadrature settings shared by assembly and error norms.
///
/// All integrands here are smooth but non-polynomial (rational in the metric
/// and in sqrt(det)), so exactness degrees are a proxy; robustness is checked
/// by rerunning with doubled().
struct QuadratureConfig {
  int tri_degree = 10;   ///< polynomial exactness of the triangle rule
  int edge_points = 8;   ///< Gauss-Legendre points per mesh edge
  int t_points = 10;     ///< Gauss-Legendre points for the homotopy integral

  QuadratureConfig doubled() const { return {2 * tri_degree, 2 * edge_points, 2 * t_points}; }
  std::string describe() const;
};

/// One-dimensional Gauss rule on [0,1]; weights sum to the weight-function
/// integral (1 for Legendre).
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule on [0,1] (exact for degree 2n-1).
GaussRule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [0,1] with weight (1-x): integrates
/// (1-x)*p(x) exactly for polynomial degree of p up to 2n-1.
GaussRule gauss_jacobi_1_0(int n);

/// Quadrature on the reference triangle {x,y >= 0, x+y <= 1}.
/// Conical product of Gauss-Legendre and Gauss-Jacobi rules: every point is
/// strictly interior and every weight positive, for any exactness degree.
/// Weights sum to the reference area 1/2.
struct TriangleRule {
  int degree = 0;                 ///< polynomial exactness
  std::vector<Vec2> points;       ///< reference coordinates (xi, eta)
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }

  static TriangleRule create(int degree);

  /// Barycentric coordinates (1-xi-eta, xi, eta) of point i.
  Vec3 barycentric(int i) const {
    const Vec2& p = points[i];
    return Vec3(1.0 - p.x() - p.y(), p.x(), p.y());
  }
};

}  // namespace curvregge
