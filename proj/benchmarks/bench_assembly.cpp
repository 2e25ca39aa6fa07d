#include <benchmark/benchmark.h>

#include "curvregge/assembly.hpp"
#include "curvregge/mesh.hpp"
#include "curvregge/metric.hpp"

using namespace curvregge;

static void BM_CurvatureRhs(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  const ReggeSpace regge(mesh, 2);
  const LagrangeSpace lagrange(mesh, 1);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  const QuadratureConfig quad;
  for (auto _ : state) {
    const VecX rhs = assemble_curvature_rhs(g_h, lagrange, quad);
    benchmark::DoNotOptimize(rhs.sum());
  }
}
BENCHMARK(BM_CurvatureRhs)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MassMatrix(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  const ReggeSpace regge(mesh, 2);
  const LagrangeSpace lagrange(mesh, 1);
  const ReggeFunction g_h = interpolate_metric(regge, *test_metric_field());
  const ReggeMetricField field(g_h);
  const QuadratureConfig quad;
  for (auto _ : state) {
    const SparseMat m = assemble_mass_matrix(field, lagrange, quad);
    benchmark::DoNotOptimize(m.nonZeros());
  }
}
BENCHMARK(BM_MassMatrix)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
