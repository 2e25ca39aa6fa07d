#include <benchmark/benchmark.h>

#include "curvregge/mesh.hpp"
#include "curvregge/regge.hpp"

using namespace curvregge;

static void BM_BuildPerturbedMesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const Mesh mesh = perturb_interior_vertices(build_uniform_square_mesh(n), 0.2, 42);
    benchmark::DoNotOptimize(mesh.h());
  }
}
BENCHMARK(BM_BuildPerturbedMesh)->Arg(16)->Arg(32)->Arg(64);

static void BM_SubdivisionLattice(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  for (auto _ : state) {
    const SubdivisionLattice lat = subdivision_lattice(mesh, 2);
    benchmark::DoNotOptimize(lat.n_global());
  }
}
BENCHMARK(BM_SubdivisionLattice)->Arg(16)->Arg(32);

static void BM_ReggeSpaceBuild(benchmark::State& state) {
  const Mesh mesh = perturb_interior_vertices(
      build_uniform_square_mesh(static_cast<int>(state.range(0))), 0.2, 42);
  for (auto _ : state) {
    const ReggeSpace space(mesh, 2);
    benchmark::DoNotOptimize(space.n_dofs());
  }
}
BENCHMARK(BM_ReggeSpaceBuild)->Arg(16)->Arg(32);
