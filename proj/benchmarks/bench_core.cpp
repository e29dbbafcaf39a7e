#include <benchmark/benchmark.h>

#include "spherecs/coherence.hpp"
#include "spherecs/optimize.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/recover.hpp"
#include "spherecs/rng.hpp"
#include "spherecs/sensing.hpp"

using namespace spherecs;

static void BM_BuildMatrix(benchmark::State& state) {
  const int b = int(state.range(0));
  const auto pat = random_pattern(RandomMeasure::Uniform, 2 * b * b, Domain::S2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_matrix(pat, b).entries.data());
}
BENCHMARK(BM_BuildMatrix)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Coherence(benchmark::State& state) {
  const int b = int(state.range(0));
  const auto a = build_matrix(random_pattern(RandomMeasure::Uniform, b * b, Domain::S2, 2), b);
  for (auto _ : state) benchmark::DoNotOptimize(coherence_of(a.entries).mu);
}
BENCHMARK(BM_Coherence)->Arg(10)->Arg(20)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ObjectiveProbe(benchmark::State& state) {
  const int m = int(state.range(0));
  const auto t = equispaced_elevation(m);
  CoherenceObjective obj(t, Domain::S2, 10);
  Rng rng(3);
  std::vector<double> ang(obj.num_angles());
  for (auto& a : ang) a = rng.uniform(0.0, 6.283185307179586);
  obj.set_angles(ang);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.probe(j, rng.uniform(0.0, 6.283185307179586)));
    j = (j + 1) % obj.num_angles();
  }
}
BENCHMARK(BM_ObjectiveProbe)->Arg(40)->Arg(100);

static void BM_FullCandidate(benchmark::State& state) {
  const int m = int(state.range(0));
  const auto t = equispaced_elevation(m);
  Rng rng(3);
  std::vector<double> ang(static_cast<std::size_t>(m));
  for (auto& a : ang) a = rng.uniform(0.0, 6.283185307179586);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_candidate(t, ang, Domain::S2, 10));
}
BENCHMARK(BM_FullCandidate)->Arg(40)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_QcbpSolve(benchmark::State& state) {
  const int m = int(state.range(0));
  const auto a = build_matrix(regular_pattern(RegularKind::Hammersley, m, Domain::S2), 10);
  const auto g = sparse_signal({100, 10, SignalDistribution::ComplexGaussian, 4});
  const Eigen::VectorXcd y = a.entries * g;
  for (auto _ : state) benchmark::DoNotOptimize(qcbp_solve({a.entries, y, 0.0}).objective);
}
BENCHMARK(BM_QcbpSolve)->Arg(50)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_Omp(benchmark::State& state) {
  const auto a = build_matrix(regular_pattern(RegularKind::Hammersley, 60, Domain::S2), 10);
  const auto g = sparse_signal({100, 10, SignalDistribution::ComplexGaussian, 4});
  const Eigen::VectorXcd y = a.entries * g;
  for (auto _ : state) benchmark::DoNotOptimize(omp_solve(a.entries, y, 10).residual);
}
BENCHMARK(BM_Omp)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
