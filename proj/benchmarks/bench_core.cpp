#include <benchmark/benchmark.h>

#include "ricci/flow.hpp"
#include "ricci/generator.hpp"
#include "ricci/geometry.hpp"
#include "ricci/spectrum.hpp"

using namespace ricci;

namespace {

// rounds 2..5 gives roughly 60, 250, 1000 and 4000 vertices.
IntrinsicMesh mesh_for(const benchmark::State& state) {
  return generate_genus2({static_cast<int>(state.range(0)), 0.05, 7});
}

void BM_CurvatureField(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  const MetricState u = MetricState::zero(m);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_field(m, u));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_CurvatureField)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_AssembleOperators(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  const MetricState u = MetricState::zero(m);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_operators(m, u));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_AssembleOperators)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_SmallestEigenpairsCold(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  for (auto _ : state) benchmark::DoNotOptimize(smallest_eigenpairs(ops, 5));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_SmallestEigenpairsCold)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SmallestEigenpairsWarm(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  const SpectrumSlice prev = smallest_eigenpairs(ops, 5);
  for (auto _ : state) benchmark::DoNotOptimize(smallest_eigenpairs(ops, 5, {}, &prev));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_SmallestEigenpairsWarm)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_FlowStep(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  const MetricState u = MetricState::zero(m);
  for (auto _ : state) benchmark::DoNotOptimize(flow_step(m, u, 1e-4));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_FlowStep)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_RunFlow(benchmark::State& state) {
  const IntrinsicMesh m = mesh_for(state);
  FlowConfig config;
  config.eigen_count = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_flow(m, config));
  state.counters["V"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_RunFlow)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
