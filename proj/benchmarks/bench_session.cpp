#include <benchmark/benchmark.h>

#include <vector>

#include "blindsim/analytic.hpp"
#include "blindsim/protocol.hpp"
#include "blindsim/spad.hpp"

namespace {

using namespace blindsim;

SessionConfig config(double mu_b, std::uint64_t rounds) {
  SessionConfig c;
  c.intensity.mu_b_eff = mu_b;
  c.rounds = rounds;
  return c;
}

void BM_Round(benchmark::State& state) {
  RoundSimulator sim(config(static_cast<double>(state.range(0)) / 100.0, 1));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Round)->Arg(37)->Arg(188)->Arg(1652);

void BM_GradedRound(benchmark::State& state) {
  auto c = config(1.88, 1);
  c.dead_time = default_graded_model();
  RoundSimulator sim(c);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GradedRound);

void BM_SessionPair(benchmark::State& state) {
  const auto c = config(1.88, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_session_pair(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SessionPair)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_AnalyticCurves(benchmark::State& state) {
  std::vector<double> mus(200);
  for (std::size_t k = 0; k < mus.size(); ++k) mus[k] = 0.1 * static_cast<double>(k);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_curves(mus, 0.1));
}
BENCHMARK(BM_AnalyticCurves);

void BM_TwoPulseScan(benchmark::State& state) {
  const auto delays = linear_delays(50e-9, 3.5e-6, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_two_pulse_scan(default_graded_model(), delays, 10'000, 1));
  }
}
BENCHMARK(BM_TwoPulseScan)->Unit(benchmark::kMillisecond);

void BM_RecoveryFit(benchmark::State& state) {
  std::vector<EfficiencySample> samples;
  for (double d : linear_delays(50e-9, 3.5e-6, 50)) {
    samples.push_back({d, relative_efficiency(default_graded_model(), d)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_recovery_curve(samples));
}
BENCHMARK(BM_RecoveryFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
