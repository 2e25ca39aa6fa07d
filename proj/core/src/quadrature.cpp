#include "curvregge/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>

namespace curvregge {

namespace {

// Golub-Welsch: nodes/weights of a Gauss rule from the symmetric tridiagonal
// Jacobi matrix of the orthogonal-polynomial recurrence. alpha/beta are the
// Jacobi weight exponents (1-x)^a (1+x)^b on [-1,1]; mu0 its total mass.
GaussRule golub_welsch(int n, double a, double b, double mu0) {
  if (n < 1) throw ConfigError("gauss rule needs at least 1 point");
  MatX jac = MatX::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    jac(k, k) = (k == 0) ? (b - a) / (a + b + 2.0)
                         : (b * b - a * a) / (s * (s + 2.0));
    if (k >= 1) {
      const double bk = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
                        (s * s * (s + 1.0) * (s - 1.0));
      jac(k, k - 1) = jac(k - 1, k) = std::sqrt(bk);
    }
  }
  Eigen::SelfAdjointEigenSolver<MatX> es(jac);
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = es.eigenvalues()(i);  // ascending, in [-1,1]
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  GaussRule r = golub_welsch(n, 0.0, 0.0, 2.0);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

GaussRule gauss_jacobi_1_0(int n) {
  // mu0 = integral of (1-x) over [-1,1] = 2. Mapping to [0,1] turns the
  // weight (1-x) into 2(1-y) and dx into dy/... combined factor 1/4.
  GaussRule r = golub_welsch(n, 1.0, 0.0, 2.0);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= 0.25;
  }
  return r;
}

TriangleRule TriangleRule::create(int degree) {
  if (degree < 0) throw ConfigError("triangle rule degree must be nonnegative");
  const int n = degree / 2 + 1;  // ceil((degree+1)/2)
  const GaussRule gl = gauss_legendre(n);
  const GaussRule gj = gauss_jacobi_1_0(n);
  TriangleRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  // x = s*(1-y) collapses the unit square onto the triangle; the Jacobian
  // (1-y) is absorbed by the Jacobi weight.
  for (int j = 0; j < gj.size(); ++j) {
    const double y = gj.points[j];
    for (int i = 0; i < gl.size(); ++i) {
      rule.points.emplace_back(gl.points[i] * (1.0 - y), y);
      rule.weights.push_back(gl.weights[i] * gj.weights[j]);
    }
  }
  return rule;
}

std::string QuadratureConfig::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "tri-degree=%d edge-points=%d t-points=%d",
                tri_degree, edge_points, t_points);
  return buf;
}

}  // namespace curvregge
