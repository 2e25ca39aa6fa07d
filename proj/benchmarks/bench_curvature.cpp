#include <benchmark/benchmark.h>

#include "curvregge/curvature.hpp"
#include "curvregge/mesh.hpp"

using namespace curvregge;

static void BM_DiscreteCurvature(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  const ReggeSpace regge(mesh, 2);
  const LagrangeSpace lagrange(mesh, 1);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  const QuadratureConfig quad;
  for (auto _ : state) {
    const CurvatureResult result = discrete_curvature(g_h, lagrange, quad);
    benchmark::DoNotOptimize(result.kappa.coefficients().sum());
  }
}
BENCHMARK(BM_DiscreteCurvature)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_AngleDefectReport(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  const ReggeSpace regge(mesh, 0);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  for (auto _ : state) {
    const AngleDefectReport report = angle_defect_report(g_h);
    benchmark::DoNotOptimize(report.defects.size());
  }
}
BENCHMARK(BM_AngleDefectReport)->Arg(16)->Arg(64);
