#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvregge/assembly.hpp"
#include "curvregge/lagrange.hpp"
#include "curvregge/metric.hpp"
#include "curvregge/regge.hpp"

namespace curvregge {

using ScalarField = std::function<double(const Vec2&)>;
using GradientField = std::function<Vec2(const Vec2&)>;

/// || u_h - u ||_{L^2} by element quadrature.
double l2_error(const LagrangeFunction& u_h, const ScalarField& u,
                const QuadratureConfig& quad);

/// Element-wise | u_h - u |_{H^1} seminorm error, root-sum-square.
double broken_h1_seminorm_error(const LagrangeFunction& u_h, const GradientField& grad_u,
                                const QuadratureConfig& quad);

/// Frobenius-norm L^2 error of a Regge function against a matrix field.
double regge_l2_error(const ReggeFunction& g_h, const MetricField& g,
                      const QuadratureConfig& quad);

/// Broken H^1 seminorm error: local polynomial derivatives against the
/// analytic first derivatives, Frobenius norm, root-sum-square.
double regge_broken_h1_error(const ReggeFunction& g_h, const MetricField& g,
                             const QuadratureConfig& quad);

/// log(e0/e1) / log(h0/h1).
double observed_order(double h0, double e0, double h1, double e1);

struct ConvergenceRow {
  double h = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;
  double g_l2_error = 0.0;
  double g_h1_error = 0.0;
  int dofs_regge = 0;
  int dofs_lagrange = 0;
  double seconds = 0.0;
  std::optional<double> l2_order;  ///< empty on the first row
  std::optional<double> h1_order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  void compute_orders();
  /// header: h,l2_error,l2_order,h1_error,h1_order,g_l2_error,g_h1_error,
  ///         dofs_regge,dofs_lagrange,seconds
  std::string to_csv() const;
};

/// Refinement study of the discrete curvature of the built-in test metric on
/// seeded random perturbations of uniform triangulations of (-1,1)^2.
/// Deterministic for a fixed seed.
ConvergenceTable run_convergence_study(int r, int q, const std::vector<int>& sizes,
                                       std::uint64_t seed, const QuadratureConfig& quad,
                                       MassKind mass_kind = MassKind::consistent,
                                       double perturbation = 0.2);

struct InterpolationRow {
  double h = 0.0;
  double g_l2_error = 0.0;
  double g_h1_error = 0.0;
  int dofs_regge = 0;
  double seconds = 0.0;
  std::optional<double> l2_order;
  std::optional<double> h1_order;
};

struct InterpolationTable {
  std::vector<InterpolationRow> rows;
  void compute_orders();
  /// header: h,g_l2_error,g_l2_order,g_h1_error,g_h1_order,dofs_regge,seconds
  std::string to_csv() const;
};

/// Interpolation-only rates of the test metric on the same mesh family.
InterpolationTable run_interpolation_study(int r, const std::vector<int>& sizes,
                                           std::uint64_t seed,
                                           const QuadratureConfig& quad,
                                           double perturbation = 0.2);

}  // namespace curvregge
