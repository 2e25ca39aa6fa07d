#include "doctest.h"

#include <cmath>

#include "curvregge/quadrature.hpp"

using namespace curvregge;

namespace {
double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }
}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss-legendre small rules match the classical nodes") {
  const GaussRule r1 = gauss_legendre(1);
  CHECK(r1.points[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  const GaussRule r2 = gauss_legendre(2);
  const double node = 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
  CHECK(r2.points[0] == doctest::Approx(node).epsilon(1e-14));
  CHECK(r2.points[1] == doctest::Approx(1.0 - node).epsilon(1e-14));
  CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates monomials exactly up to degree 2n-1") {
  for (int n = 1; n <= 12; ++n) {
    const GaussRule r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (int i = 0; i < r.size(); ++i) sum += r.weights[i] * std::pow(r.points[i], k);
      CHECK(sum == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-jacobi integrates (1-x) x^k exactly up to degree 2n-1") {
  for (int n = 1; n <= 12; ++n) {
    const GaussRule r = gauss_jacobi_1_0(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (int i = 0; i < r.size(); ++i) sum += r.weights[i] * std::pow(r.points[i], k);
      const double exact = 1.0 / (k + 1) - 1.0 / (k + 2);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rule is exact for its stated degree") {
  for (int degree : {0, 1, 2, 3, 5, 8, 10, 16, 20}) {
    const TriangleRule rule = TriangleRule::create(degree);
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (int p = 0; p < rule.size(); ++p)
          sum += rule.weights[p] * std::pow(rule.points[p].x(), a) *
                 std::pow(rule.points[p].y(), b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("triangle rule points are strictly interior with positive weights") {
  for (int degree : {10, 20}) {
    const TriangleRule rule = TriangleRule::create(degree);
    double wsum = 0.0;
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      CHECK(bary.minCoeff() > 0.0);
      CHECK(rule.weights[p] > 0.0);
      wsum += rule.weights[p];
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("config doubling doubles every knob") {
  const QuadratureConfig quad;
  const QuadratureConfig d = quad.doubled();
  CHECK(d.tri_degree == 2 * quad.tri_degree);
  CHECK(d.edge_points == 2 * quad.edge_points);
  CHECK(d.t_points == 2 * quad.t_points);
}

}  // TEST_SUITE
