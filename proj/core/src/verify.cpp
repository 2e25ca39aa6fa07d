#include "curvregge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "curvregge/analysis.hpp"
#include "curvregge/curvature.hpp"
#include "curvregge/lagrange.hpp"
#include "curvregge/mesh.hpp"
#include "curvregge/metric.hpp"
#include "curvregge/regge.hpp"

namespace curvregge {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

Mat2 random_spd(std::mt19937_64& rng, double spread) {
  Mat2 g;
  do {
    const double a = uniform(rng, -spread, spread);
    const double b = uniform(rng, -spread, spread);
    const double c = uniform(rng, -spread, spread);
    g << 1.0 + a, c, c, 1.0 + b;
  } while (!is_spd(g) || sym_eigenvalues(g).first < 0.2);
  return g;
}

// Random piecewise constant metric with edge dofs near 1, redrawn until
// every element has eigenvalues in [0.35, 3]. The eigenvalue band keeps the
// homotopy path (1-t)delta + t g_h uniformly well conditioned, so the
// Gauss-Legendre t-rule is converged far below the comparison tolerances.
// Deterministic for a fixed stream.
ReggeFunction random_pc_metric(const ReggeSpace& space, std::mt19937_64& rng,
                               double spread) {
  const TriangleRule point = TriangleRule::create(0);
  for (;;) {
    VecX dofs(space.n_dofs());
    for (int i = 0; i < dofs.size(); ++i) dofs(i) = 1.0 + uniform(rng, -spread, spread);
    ReggeFunction g(space, std::move(dofs));
    const SpdReport report = check_spd(g, point);
    if (report.spd && report.min_eigenvalue >= 0.35 && report.max_eigenvalue <= 3.0)
      return g;
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace

AngleDefectEquality check_angle_defect_equality(int n, double perturbation,
                                                std::uint64_t seed, int n_metrics,
                                                const QuadratureConfig& quad,
                                                bool flip_defect_sign) {
  const Mesh mesh =
      perturb_interior_vertices(build_uniform_square_mesh(n), perturbation, seed);
  const ReggeSpace regge(mesh, 0);
  const LagrangeSpace lagrange(mesh, 1);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<double> pairings, defects;
  AngleDefectEquality out;
  for (int k = 0; k < n_metrics; ++k) {
    const ReggeFunction g_h = random_pc_metric(regge, rng, 0.3);
    const CurvatureResult result = discrete_curvature(g_h, lagrange, quad);
    const VecX pair = pairing_all(result.kappa, g_h, quad);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      const int dof = lagrange.vertex_dof(v);
      if (dof < 0) continue;
      const double defect = (flip_defect_sign ? -1.0 : 1.0) * angle_defect(g_h, v);
      pairings.push_back(pair(dof));
      defects.push_back(defect);
      out.max_discrepancy = std::max(out.max_discrepancy, std::abs(pair(dof) - defect));
    }
  }
  out.pairings = Eigen::Map<VecX>(pairings.data(), static_cast<int>(pairings.size()));
  out.defects = Eigen::Map<VecX>(defects.data(), static_cast<int>(defects.size()));
  return out;
}

LinearizationSlopes check_linearization_slopes(int n, double perturbation,
                                               std::uint64_t seed, int n_pairs,
                                               const std::vector<double>& eps_values,
                                               const QuadratureConfig& quad) {
  const Mesh mesh =
      perturb_interior_vertices(build_uniform_square_mesh(n), perturbation, seed);
  const ReggeSpace regge(mesh, 0);
  std::vector<int> interior;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!mesh.vertex_on_boundary(v)) interior.push_back(v);
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);

  LinearizationSlopes out;
  std::vector<double> bh_samples;
  std::vector<double> log_eps;
  for (double e : eps_values) log_eps.push_back(std::log(e));
  while (static_cast<int>(out.slopes.size()) < n_pairs) {
    // alternate between the Euclidean base metric and a random one
    const bool euclidean = (out.slopes.size() % 2 == 0);
    const ReggeFunction g_h = euclidean
                                  ? ReggeFunction(regge, VecX::Ones(regge.n_dofs()))
                                  : random_pc_metric(regge, rng, 0.25);
    VecX sdofs(regge.n_dofs());
    for (int i = 0; i < sdofs.size(); ++i) sdofs(i) = uniform(rng, -0.3, 0.3);
    const ReggeFunction sigma_h(regge, std::move(sdofs));
    const int vertex = interior[rng() % interior.size()];

    std::vector<double> log_disc;
    double half_bh = 0.0;
    double max_disc = 0.0;
    for (double eps : eps_values) {
      const LinearizationCheck check =
          verify_linearization(g_h, sigma_h, vertex, eps, quad);
      log_disc.push_back(std::log(std::max(check.discrepancy, 1e-300)));
      half_bh = check.half_b_h;
      max_disc = std::max(max_disc, check.discrepancy);
    }
    if (max_disc < 1e-12) continue;  // degenerate draw, below the roundoff floor
    out.slopes.push_back(fit_slope(log_eps, log_disc));
    bh_samples.push_back(half_bh);
  }
  out.half_bh_samples =
      Eigen::Map<VecX>(bh_samples.data(), static_cast<int>(bh_samples.size()));
  out.min_slope = *std::min_element(out.slopes.begin(), out.slopes.end());
  out.max_slope = *std::max_element(out.slopes.begin(), out.slopes.end());
  return out;
}

FlatMetricNorms check_flat_metric_exactness(int n, const std::vector<int>& r_values,
                                            const std::vector<int>& q_values,
                                            std::uint64_t seed,
                                            const QuadratureConfig& quad) {
  const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(n), 0.2, seed);
  std::mt19937_64 rng(seed ^ 0xa0761d6478bd642full);
  std::vector<Mat2> metrics = {Mat2::Identity(), 4.0 * Mat2::Identity()};
  for (int k = 0; k < 4; ++k) metrics.push_back(random_spd(rng, 0.5));

  FlatMetricNorms out;
  for (int r : r_values) {
    const ReggeSpace regge(mesh, r);
    for (int q : q_values) {
      const LagrangeSpace lagrange(mesh, q);
      for (const Mat2& m : metrics) {
        const ConstantMetric field(m);
        const ReggeFunction g_h = interpolate_metric(regge, field);
        const CurvatureResult result = discrete_curvature(g_h, lagrange, quad);
        const double norm =
            l2_error(result.kappa, [](const Vec2&) { return 0.0; }, quad);
        out.norms.push_back(norm);
        out.max_norm = std::max(out.max_norm, norm);
      }
    }
  }
  return out;
}

std::vector<PropertyResult> run_properties(const std::string& filter, std::uint64_t seed,
                                           const QuadratureConfig& quad,
                                           const std::string& mutation) {
  std::vector<PropertyResult> results;
  auto wanted = [&](const std::string& name) { return filter.empty() || filter == name; };
  char buf[160];

  if (wanted("frames")) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Mat2 g = random_spd(rng, 0.7);
      const double angle = 2.0 * M_PI * unit_uniform(rng);
      const EdgeFrame f = edge_frame(g, Vec2(std::cos(angle), std::sin(angle)));
      worst = std::max({worst, std::abs(f.tau_g.dot(g * f.tau_g) - 1.0),
                        std::abs(f.n_g.dot(g * f.n_g) - 1.0),
                        std::abs(f.tau_g.dot(g * f.n_g))});
      const Mat2 completeness =
          f.tau_g * f.tau_g.transpose() + f.n_g * f.n_g.transpose() - spd_inverse(g);
      worst = std::max(worst, completeness.cwiseAbs().maxCoeff());
      // g n_g is parallel to the Euclidean normal
      const Vec2 gn = g * f.n_g;
      worst = std::max(worst, std::abs(gn.x() * f.n.y() - gn.y() * f.n.x()));
    }
    const bool pass = worst <= 1e-12;
    std::snprintf(buf, sizeof(buf), "max frame identity residual %.3e (tol 1e-12)",
                  worst);
    results.push_back({"frames", pass, buf});
  }

  if (wanted("s-g-identity")) {
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Mat2 g = random_spd(rng, 0.7);
      Mat2 sigma;
      const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1),
                   c = uniform(rng, -1, 1);
      sigma << a, c, c, b;
      const double angle = 2.0 * M_PI * unit_uniform(rng);
      const EdgeFrame f = edge_frame(g, Vec2(std::cos(angle), std::sin(angle)));
      const double lhs = f.n_g.dot(s_g(sigma, g) * f.n_g);
      const double rhs = -f.tau_g.dot(sigma * f.tau_g);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    const bool pass = worst <= 1e-12;
    std::snprintf(buf, sizeof(buf),
                  "max n_g^T(S_g sigma)n_g + tau_g^T sigma tau_g = %.3e (tol 1e-12)",
                  worst);
    results.push_back({"s-g-identity", pass, buf});
  }

  if (wanted("angle-defect")) {
    const AngleDefectEquality eq = check_angle_defect_equality(
        4, 0.2, seed, 50, quad, mutation == "defect-sign");
    const bool pass = eq.max_discrepancy <= 1e-9;
    std::snprintf(buf, sizeof(buf),
                  "max |<kappa_h,phi_i> - defect_i| = %.3e over %d samples (tol 1e-9)",
                  eq.max_discrepancy, static_cast<int>(eq.pairings.size()));
    results.push_back({"angle-defect", pass, buf});
  }

  if (wanted("linearization")) {
    const LinearizationSlopes sl =
        check_linearization_slopes(4, 0.2, seed, 20, {1e-2, 5e-3, 2.5e-3}, quad);
    const bool pass = sl.min_slope >= 1.8 && sl.max_slope <= 2.2;
    std::snprintf(buf, sizeof(buf), "eps-slopes in [%.3f, %.3f] (required [1.8, 2.2])",
                  sl.min_slope, sl.max_slope);
    results.push_back({"linearization", pass, buf});
  }

  if (wanted("flat-metric")) {
    const FlatMetricNorms fm =
        check_flat_metric_exactness(4, {0, 1, 2}, {1, 2}, seed, quad);
    const bool pass = fm.max_norm <= 1e-9;
    std::snprintf(buf, sizeof(buf), "max ||kappa_h||_L2 = %.3e over %d flat metrics "
                  "(tol 1e-9)", fm.max_norm, static_cast<int>(fm.norms.size()));
    results.push_back({"flat-metric", pass, buf});
  }

  if (results.empty()) throw ConfigError("unknown property: " + filter);
  return results;
}

}  // namespace curvregge
