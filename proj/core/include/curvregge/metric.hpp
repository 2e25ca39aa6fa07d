#pragma once

#include <array>
#include <functional>
#include <memory>

#include "curvregge/types.hpp"

namespace curvregge {

/// Value of a symmetric 2x2 matrix field at a point, optionally with its two
/// partial-derivative matrices.
struct MetricValue {
  Mat2 g = Mat2::Identity();
  std::array<Mat2, 2> dg{Mat2::Zero(), Mat2::Zero()};  ///< d g / d x, d g / d y
  bool has_derivatives = false;
};

/// Relative eigenvalue test for positive definiteness of a symmetric 2x2
/// matrix: min eigenvalue > tol * max eigenvalue.
bool is_spd(const Mat2& g, double rel_tol = 1e-12);

/// Smallest and largest eigenvalue of a symmetric 2x2 matrix.
std::pair<double, double> sym_eigenvalues(const Mat2& g);

/// Adjugate/determinant inverse; throws SpdError when not positive definite.
Mat2 spd_inverse(const Mat2& g);

/// Christoffel symbols of the second kind, gamma[k][i][j], symmetric in (i,j).
struct ChristoffelSymbols {
  std::array<std::array<std::array<double, 2>, 2>, 2> gamma{};
  double operator()(int k, int i, int j) const { return gamma[k][i][j]; }
};

ChristoffelSymbols christoffel(const MetricValue& g);

/// Riemannian Hessian: (Hess_g v)_ij = d2v_ij - Gamma^k_ij dv_k.
Mat2 hessian_g(const Mat2& v_second_derivs, const Vec2& v_gradient,
               const ChristoffelSymbols& gamma);

/// S_g(sigma) = sigma - g * Tr(g^{-1} sigma).
Mat2 s_g(const Mat2& sigma, const Mat2& g);

/// Euclidean and g-orthonormal frame of an edge direction. tau is the unit
/// tangent and n = J tau the corresponding normal (outward when tau runs
/// counterclockwise around the element).
struct EdgeFrame {
  Vec2 tau, n;      ///< Euclidean unit tangent / normal
  Vec2 tau_g, n_g;  ///< g-orthonormal tangent / normal
};

EdgeFrame edge_frame(const Mat2& g, const Vec2& tangent);

// ---------------------------------------------------------------------------
// Metric fields
// ---------------------------------------------------------------------------

class Mesh;

/// A symmetric 2x2 matrix field evaluable anywhere on the mesh. Analytic
/// fields ignore the element/barycentric arguments; discrete fields ignore
/// the world point. All implementations are pure and concurrency-safe.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual MetricValue eval(const Mesh& mesh, int tri, const Vec3& bary,
                           const Vec2& world, bool need_derivatives) const = 0;
};

/// Analytic field given by a callback of the world point.
class AnalyticMetric final : public MetricField {
 public:
  explicit AnalyticMetric(std::function<MetricValue(const Vec2&)> f) : f_(std::move(f)) {}
  MetricValue eval(const Mesh&, int, const Vec3&, const Vec2& world, bool) const override {
    return f_(world);
  }

 private:
  std::function<MetricValue(const Vec2&)> f_;
};

/// Spatially constant field.
class ConstantMetric final : public MetricField {
 public:
  explicit ConstantMetric(const Mat2& g) { value_.g = g; value_.has_derivatives = true; }
  MetricValue eval(const Mesh&, int, const Vec3&, const Vec2&, bool) const override {
    return value_;
  }

 private:
  MetricValue value_;
};

/// Convex path (1-t)*identity + t*endpoint from the Euclidean metric to a
/// target metric; pointwise positive definite whenever the endpoint is.
class HomotopyMetric final : public MetricField {
 public:
  HomotopyMetric(const MetricField& endpoint, double t) : endpoint_(endpoint), t_(t) {}
  MetricValue eval(const Mesh& mesh, int tri, const Vec3& bary, const Vec2& world,
                   bool need_derivatives) const override {
    MetricValue v = endpoint_.eval(mesh, tri, bary, world, need_derivatives);
    v.g = (1.0 - t_) * Mat2::Identity() + t_ * v.g;
    v.dg[0] *= t_;
    v.dg[1] *= t_;
    return v;
  }
  double t() const { return t_; }

 private:
  const MetricField& endpoint_;
  double t_;
};

// ---------------------------------------------------------------------------
// Built-in test metric: graph metric of z = f(x,y) with
// f = x^2/2 - x^4/12 + y^2/2 - y^4/12 on [-1,1]^2.
// ---------------------------------------------------------------------------

/// Graph metric value with exact (hand-differentiated) first derivatives.
MetricValue eval_test_metric(double x, double y);

/// Exact Gaussian curvature of the test metric (closed form).
double exact_test_curvature(double x, double y);

/// Euclidean gradient of the exact curvature (closed form).
Vec2 exact_test_curvature_gradient(double x, double y);

/// The test metric as a MetricField.
std::shared_ptr<const MetricField> test_metric_field();

}  // namespace curvregge
