#include "curvregge/metric.hpp"

#include <cmath>

namespace curvregge {

std::pair<double, double> sym_eigenvalues(const Mat2& g) {
  const double tr = g(0, 0) + g(1, 1);
  // (a-d)^2 + 4 b^2 equals tr^2 - 4 det but does not cancel for
  // near-double eigenvalues
  const double diff = g(0, 0) - g(1, 1);
  const double disc = std::hypot(diff, 2.0 * g(0, 1));
  return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

bool is_spd(const Mat2& g, double rel_tol) {
  const auto [lo, hi] = sym_eigenvalues(g);
  return hi > 0.0 && lo > rel_tol * hi;
}

Mat2 spd_inverse(const Mat2& g) {
  if (!is_spd(g)) throw SpdError("matrix is not positive definite");
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  Mat2 inv;
  inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  return inv / det;
}

ChristoffelSymbols christoffel(const MetricValue& g) {
  const Mat2 ginv = spd_inverse(g.g);
  ChristoffelSymbols c;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l)
          s += ginv(k, l) * (g.dg[j](l, i) + g.dg[i](l, j) - g.dg[l](i, j));
        c.gamma[k][i][j] = c.gamma[k][j][i] = 0.5 * s;
      }
  return c;
}

Mat2 hessian_g(const Mat2& v_second_derivs, const Vec2& v_gradient,
               const ChristoffelSymbols& gamma) {
  Mat2 h;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      h(i, j) = v_second_derivs(i, j) -
                (gamma(0, i, j) * v_gradient[0] + gamma(1, i, j) * v_gradient[1]);
  return h;
}

Mat2 s_g(const Mat2& sigma, const Mat2& g) {
  const Mat2 ginv = spd_inverse(g);
  return sigma - g * (ginv * sigma).trace();
}

EdgeFrame edge_frame(const Mat2& g, const Vec2& tangent) {
  if (tangent.squaredNorm() == 0.0) throw ConfigError("edge_frame: zero tangent");
  if (!is_spd(g)) throw SpdError("edge_frame: metric not positive definite");
  EdgeFrame f;
  f.tau = tangent.normalized();
  f.n = rotate_quarter(f.tau);
  const double tgt = f.tau.dot(g * f.tau);
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  f.tau_g = f.tau / std::sqrt(tgt);
  f.n_g = rotate_quarter(g * f.tau) / (std::sqrt(tgt) * std::sqrt(det));
  return f;
}

// ---------------------------------------------------------------------------
// Test metric
// ---------------------------------------------------------------------------

MetricValue eval_test_metric(double x, double y) {
  const double fx = x - x * x * x / 3.0;
  const double fy = y - y * y * y / 3.0;
  const double fxx = 1.0 - x * x;
  const double fyy = 1.0 - y * y;
  MetricValue v;
  v.g << 1.0 + fx * fx, fx * fy, fx * fy, 1.0 + fy * fy;
  v.dg[0] << 2.0 * fx * fxx, fxx * fy, fxx * fy, 0.0;
  v.dg[1] << 0.0, fx * fyy, fx * fyy, 2.0 * fy * fyy;
  v.has_derivatives = true;
  return v;
}

namespace {
double test_denominator(double x, double y) {
  const double px = x * x - 3.0;
  const double py = y * y - 3.0;
  return 9.0 + x * x * px * px + y * y * py * py;
}
}  // namespace

double exact_test_curvature(double x, double y) {
  const double d = test_denominator(x, y);
  return 81.0 * (1.0 - x * x) * (1.0 - y * y) / (d * d);
}

Vec2 exact_test_curvature_gradient(double x, double y) {
  const double d = test_denominator(x, y);
  const double dx = 6.0 * x * (x * x - 3.0) * (x * x - 1.0);
  const double dy = 6.0 * y * (y * y - 3.0) * (y * y - 1.0);
  const double d3 = d * d * d;
  return Vec2(-162.0 * (1.0 - y * y) * (x * d + (1.0 - x * x) * dx) / d3,
              -162.0 * (1.0 - x * x) * (y * d + (1.0 - y * y) * dy) / d3);
}

std::shared_ptr<const MetricField> test_metric_field() {
  static const auto field = std::make_shared<AnalyticMetric>(
      [](const Vec2& p) { return eval_test_metric(p.x(), p.y()); });
  return field;
}

}  // namespace curvregge
