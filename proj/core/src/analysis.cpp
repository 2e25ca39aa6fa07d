#include "curvregge/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "curvregge/curvature.hpp"
#include "curvregge/mesh.hpp"
#include "curvregge/parallel.hpp"

namespace curvregge {

namespace {

// Element-quadrature accumulation of a pointwise squared error; returns the
// square root of the sum.
template <typename PointError>
double accumulate_l2(const Mesh& mesh, const QuadratureConfig& quad, PointError err2) {
  const TriangleRule rule = TriangleRule::create(quad.tri_degree);
  std::vector<double> per_tri(mesh.n_triangles(), 0.0);
  parallel_for(mesh.n_triangles(), [&](std::int64_t ti) {
    const int t = static_cast<int>(ti);
    double acc = 0.0;
    for (int p = 0; p < rule.size(); ++p) {
      const Vec3 bary = rule.barycentric(p);
      const Vec2 world = mesh.barycentric_to_world(t, bary);
      acc += rule.weights[p] * 2.0 * mesh.area(t) * err2(t, bary, world);
    }
    per_tri[t] = acc;
  });
  double total = 0.0;
  for (double a : per_tri) total += a;
  return std::sqrt(total);
}

double frobenius2(const Mat2& m) { return m.cwiseProduct(m).sum(); }

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string format_order(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

}  // namespace

double l2_error(const LagrangeFunction& u_h, const ScalarField& u,
                const QuadratureConfig& quad) {
  return accumulate_l2(u_h.space().mesh(), quad,
                       [&](int t, const Vec3& bary, const Vec2& world) {
                         const double d = u_h.value(t, bary) - u(world);
                         return d * d;
                       });
}

double broken_h1_seminorm_error(const LagrangeFunction& u_h, const GradientField& grad_u,
                                const QuadratureConfig& quad) {
  return accumulate_l2(u_h.space().mesh(), quad,
                       [&](int t, const Vec3& bary, const Vec2& world) {
                         double v;
                         Vec2 g;
                         Mat2 h;
                         u_h.eval_with_derivatives(t, bary, v, g, h);
                         return (g - grad_u(world)).squaredNorm();
                       });
}

double regge_l2_error(const ReggeFunction& g_h, const MetricField& g,
                      const QuadratureConfig& quad) {
  const Mesh& mesh = g_h.space().mesh();
  return accumulate_l2(mesh, quad, [&](int t, const Vec3& bary, const Vec2& world) {
    return frobenius2(g_h.value(t, bary) - g.eval(mesh, t, bary, world, false).g);
  });
}

double regge_broken_h1_error(const ReggeFunction& g_h, const MetricField& g,
                             const QuadratureConfig& quad) {
  const Mesh& mesh = g_h.space().mesh();
  return accumulate_l2(mesh, quad, [&](int t, const Vec3& bary, const Vec2& world) {
    Mat2 v, dx, dy;
    g_h.value_and_derivatives(t, bary, v, dx, dy);
    const MetricValue exact = g.eval(mesh, t, bary, world, true);
    return frobenius2(dx - exact.dg[0]) + frobenius2(dy - exact.dg[1]);
  });
}

double observed_order(double h0, double e0, double h1, double e1) {
  return std::log(e0 / e1) / std::log(h0 / h1);
}

void ConvergenceTable::compute_orders() {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].l2_order =
        observed_order(rows[i - 1].h, rows[i - 1].l2_error, rows[i].h, rows[i].l2_error);
    rows[i].h1_order =
        observed_order(rows[i - 1].h, rows[i - 1].h1_error, rows[i].h, rows[i].h1_error);
  }
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream out;
  out << "h,l2_error,l2_order,h1_error,h1_order,g_l2_error,g_h1_error,"
         "dofs_regge,dofs_lagrange,seconds\n";
  for (const auto& r : rows) {
    out << format_cell(r.h) << ',' << format_cell(r.l2_error) << ','
        << format_order(r.l2_order) << ',' << format_cell(r.h1_error) << ','
        << format_order(r.h1_order) << ',' << format_cell(r.g_l2_error) << ','
        << format_cell(r.g_h1_error) << ',' << r.dofs_regge << ',' << r.dofs_lagrange
        << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
    out << buf << "\n";
  }
  return out.str();
}

ConvergenceTable run_convergence_study(int r, int q, const std::vector<int>& sizes,
                                       std::uint64_t seed, const QuadratureConfig& quad,
                                       MassKind mass_kind, double perturbation) {
  ConvergenceTable table;
  const auto metric = test_metric_field();
  for (int n : sizes) {
    const auto start = std::chrono::steady_clock::now();
    const Mesh mesh =
        perturb_interior_vertices(build_uniform_square_mesh(n), perturbation, seed);
    const ReggeSpace regge(mesh, r);
    const LagrangeSpace lagrange(mesh, q);
    const ReggeFunction g_h = interpolate_metric(regge, *metric);
    const CurvatureResult result = discrete_curvature(g_h, lagrange, quad, mass_kind);

    ConvergenceRow row;
    row.h = mesh.h();
    row.l2_error = l2_error(
        result.kappa, [](const Vec2& p) { return exact_test_curvature(p.x(), p.y()); },
        quad);
    row.h1_error = broken_h1_seminorm_error(
        result.kappa,
        [](const Vec2& p) { return exact_test_curvature_gradient(p.x(), p.y()); }, quad);
    row.g_l2_error = regge_l2_error(g_h, *metric, quad);
    row.g_h1_error = regge_broken_h1_error(g_h, *metric, quad);
    row.dofs_regge = regge.n_dofs();
    row.dofs_lagrange = lagrange.n_interior();
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    table.rows.push_back(row);
  }
  table.compute_orders();
  return table;
}

void InterpolationTable::compute_orders() {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].l2_order = observed_order(rows[i - 1].h, rows[i - 1].g_l2_error, rows[i].h,
                                      rows[i].g_l2_error);
    rows[i].h1_order = observed_order(rows[i - 1].h, rows[i - 1].g_h1_error, rows[i].h,
                                      rows[i].g_h1_error);
  }
}

std::string InterpolationTable::to_csv() const {
  std::ostringstream out;
  out << "h,g_l2_error,g_l2_order,g_h1_error,g_h1_order,dofs_regge,seconds\n";
  for (const auto& r : rows) {
    out << format_cell(r.h) << ',' << format_cell(r.g_l2_error) << ','
        << format_order(r.l2_order) << ',' << format_cell(r.g_h1_error) << ','
        << format_order(r.h1_order) << ',' << r.dofs_regge << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
    out << buf << "\n";
  }
  return out.str();
}

InterpolationTable run_interpolation_study(int r, const std::vector<int>& sizes,
                                           std::uint64_t seed,
                                           const QuadratureConfig& quad,
                                           double perturbation) {
  InterpolationTable table;
  const auto metric = test_metric_field();
  for (int n : sizes) {
    const auto start = std::chrono::steady_clock::now();
    const Mesh mesh =
        perturb_interior_vertices(build_uniform_square_mesh(n), perturbation, seed);
    const ReggeSpace regge(mesh, r);
    const ReggeFunction g_h = interpolate_metric(regge, *metric);
    InterpolationRow row;
    row.h = mesh.h();
    row.g_l2_error = regge_l2_error(g_h, *metric, quad);
    row.g_h1_error = regge_broken_h1_error(g_h, *metric, quad);
    row.dofs_regge = regge.n_dofs();
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    table.rows.push_back(row);
  }
  table.compute_orders();
  return table;
}

}  // namespace curvregge
