#include <phonon_chill/closedform.hpp>
#include <phonon_chill/models.hpp>
#include <phonon_chill/spectral.hpp>
#include <phonon_chill/steadystate.hpp>

#include <benchmark/benchmark.h>

using namespace phonon_chill;

namespace {

SystemParams correlated_pair() {
  const double gamma = 283.0;
  auto p = SystemParams::uniform(2, 1.0, 1.0, 1.0, gamma, 1e-3, 2.0, 0.0, 0.99 * gamma);
  p.g = {1.0, -1.0};
  return p;
}

void BM_AssembleSingle(benchmark::State& state) {
  const auto model = build_single_tls(SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.01, 2.0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(model));
}
BENCHMARK(BM_AssembleSingle)->Arg(20)->Arg(60)->Arg(200);

void BM_SolveSingle(benchmark::State& state) {
  const auto model = build_single_tls(SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.01, 2.0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phonon_number(solve_model(model)));
}
BENCHMARK(BM_SolveSingle)->Arg(20)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SolveCorrelatedPair(benchmark::State& state) {
  const auto model = build_ensemble(correlated_pair(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(figure_of_merit(solve_model(model)));
}
BENCHMARK(BM_SolveCorrelatedPair)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ContinuedFraction(benchmark::State& state) {
  const auto p = SystemParams::single(1.0, 1.0, 1.0, 2.0, std::pow(10.0, -double(state.range(0))), 200.0);
  for (auto _ : state) benchmark::DoNotOptimize(phonon_number_cf(p).phonon_number);
}
BENCHMARK(BM_ContinuedFraction)->DenseRange(1, 4);

void BM_TwoOscillator(benchmark::State& state) {
  const auto p = SystemParams::uniform(8, 1.0, 1.1, 0.5, 2.0, 1e-3, 1.0, 0.0, 0.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(phonon_number_two_osc(p, 8));
}
BENCHMARK(BM_TwoOscillator);

void BM_EigenmodesDicke(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto h = AtomicHamiltonian::from_params(SystemParams::uniform(n, 1.0, 1.0, 1.0, 1.0, 0.1, 0.0, 0.1, 0.9));
  for (auto _ : state) benchmark::DoNotOptimize(eigenmodes(h));
}
BENCHMARK(BM_EigenmodesDicke)->Arg(4)->Arg(12)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
