#include <benchmark/benchmark.h>

#include "tpa/drift.hpp"
#include "tpa/dynamics.hpp"
#include "tpa/engine.hpp"
#include "tpa/rules.hpp"

namespace {

void BM_StepAggregate(benchmark::State& state, tpa::RuleTable rule) {
  tpa::EngineState s = tpa::init_state(tpa::InitialComposition{}, tpa::EngineMode::kAggregate);
  tpa::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(tpa::step(s, rule, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_StepAggregate, perturbed, tpa::perturbed_rps_rule(0.05));
BENCHMARK_CAPTURE(BM_StepAggregate, tournament, tpa::tournament_rule());

void BM_StepGraph(benchmark::State& state) {
  const auto rule = tpa::tournament_rule();
  tpa::EngineState s = tpa::init_state(tpa::InitialComposition{}, tpa::EngineMode::kGraph);
  tpa::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(tpa::step(s, rule, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepGraph)->Iterations(2'000'000);

void BM_ExactDrift(benchmark::State& state) {
  const auto rule = tpa::linear_rule(static_cast<int>(state.range(0)));
  const tpa::SimplexPoint x(0.2, 0.3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tpa::exact_drift(rule, x));
}
BENCHMARK(BM_ExactDrift)->Arg(2)->Arg(4)->Arg(16);

void BM_Rk4(benchmark::State& state) {
  const tpa::FieldSpec spec = tpa::TournamentField{};
  const tpa::SimplexPoint x0(0.5, 0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(tpa::integrate(spec, x0, 0.01, 10000));
}
BENCHMARK(BM_Rk4);

}  // namespace

BENCHMARK_MAIN();
