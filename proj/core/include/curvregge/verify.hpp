#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvregge/assembly.hpp"
#include "curvregge/quadrature.hpp"
#include "curvregge/types.hpp"

namespace curvregge {

/// Theorem-level identity between the mass pairing of the discrete curvature
/// and the independently computed angle defect, over seeded random positive
/// definite piecewise constant metrics (r=0, q=1, consistent mass).
struct AngleDefectEquality {
  VecX pairings;  ///< <kappa_h, phi_i> stacked over (metric, interior vertex)
  VecX defects;   ///< matching law-of-cosines defects
  double max_discrepancy = 0.0;
};

AngleDefectEquality check_angle_defect_equality(int n, double perturbation,
                                                std::uint64_t seed, int n_metrics,
                                                const QuadratureConfig& quad,
                                                bool flip_defect_sign = false);

/// Richardson check of the angle-defect linearization: the discrepancy
/// between the central difference of the defect and half the bilinear form
/// must scale as eps^2 (least-squares slope of log(disc) vs log(eps)).
struct LinearizationSlopes {
  std::vector<double> slopes;  ///< one per (g_h, sigma_h) pair
  VecX half_bh_samples;        ///< half_b_h stacked over pairs (finest eps)
  double min_slope = 0.0;
  double max_slope = 0.0;
};

LinearizationSlopes check_linearization_slopes(int n, double perturbation,
                                               std::uint64_t seed, int n_pairs,
                                               const std::vector<double>& eps_values,
                                               const QuadratureConfig& quad);

/// || kappa_h ||_{L^2} for interpolants of constant positive definite
/// metrics, over all requested (r, q) combinations; flat metrics must yield
/// (numerically) zero curvature.
struct FlatMetricNorms {
  std::vector<double> norms;
  double max_norm = 0.0;
};

FlatMetricNorms check_flat_metric_exactness(int n, const std::vector<int>& r_values,
                                            const std::vector<int>& q_values,
                                            std::uint64_t seed,
                                            const QuadratureConfig& quad);

/// One named property with a pass/fail verdict and a printable detail line.
struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Run the named property suites ("frames", "s-g-identity", "angle-defect",
/// "linearization", "flat-metric"); empty filter runs all. `mutation` is an
/// internal self-test hook: "defect-sign" injects a sign error into the
/// angle-defect comparison, which a healthy build must detect as a failure.
std::vector<PropertyResult> run_properties(const std::string& filter, std::uint64_t seed,
                                           const QuadratureConfig& quad,
                                           const std::string& mutation = "");

}  // namespace curvregge
