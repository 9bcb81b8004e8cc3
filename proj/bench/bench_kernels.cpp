// Serial reference versus OpenMP kernels. Arg(0) = serial, Arg(1) = parallel.
#include "evodd/assembly.hpp"
#include "evodd/interface.hpp"
#include "evodd/norms.hpp"
#include "evodd/parallel.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace evodd;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

const DecomposedMesh& mesh2d() {
  static const DecomposedMesh mesh = build_decomposed_mesh(2, 128, 0.5);
  return mesh;
}

void BM_Stiffness(benchmark::State& state) {
  const auto map = EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0);
  const ProblemCoefficients c;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(mesh2d().whole(), c, map, 0.5, exec_of(state)));
}

void BM_Load(benchmark::State& state) {
  const auto map = EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0);
  const ProblemCoefficients c;
  const auto src = SourceSpec::manufactured();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_load(mesh2d().whole(), src, c, map, 0.5, exec_of(state)));
}

void BM_HQuarter(benchmark::State& state) {
  const Problem p(build_decomposed_mesh(2, 32, 0.5), EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0),
                  ProblemCoefficients{}, SourceSpec::zero(), TimeGrid(1.0, 256));
  const auto w = make_norm_weights(p);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  InterfaceTrace eta(TraceFlavor::primal, p.grid.levels(), p.num_interface());
  for (int m = 1; m < eta.levels(); ++m) {
    for (int a = 0; a < eta.nodes(); ++a) eta.values(m, a) = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(h_quarter_seminorm(eta, w, exec_of(state)));
}

void BM_DenseSteklov(benchmark::State& state) {
  const Problem p(build_decomposed_mesh(2, 8, 0.5), EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0),
                  ProblemCoefficients{}, SourceSpec::zero(), TimeGrid(1.0, 16));
  const SteklovContext ctx(p);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_steklov_dense(ctx, 1, 5000, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Stiffness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Load)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HQuarter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DenseSteklov)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  configure_workers_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
