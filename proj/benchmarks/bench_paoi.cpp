#include <benchmark/benchmark.h>

#include "paoi/analytic.hpp"
#include "paoi/opt.hpp"
#include "paoi/sim.hpp"

namespace {

paoi::SystemModel example(paoi::Discipline d) {
  using paoi::CostFunction;
  using paoi::ServiceDistribution;
  return paoi::SystemModel::make({ServiceDistribution::deterministic(1.0), ServiceDistribution::deterministic(3.0)},
                                 {CostFunction::power(4, 2), CostFunction::power(1, 2)}, paoi::RateBox(0.01, 10), d);
}

paoi::SystemModel wide(std::size_t n, paoi::Discipline d) {
  std::vector<paoi::ServiceDistribution> svc;
  std::vector<paoi::CostFunction> cost;
  for (std::size_t k = 0; k < n; ++k) {
    svc.push_back(paoi::ServiceDistribution::gamma(2.0, 0.01 * static_cast<double>(k + 1)));
    cost.push_back(paoi::CostFunction::power(1.0 + static_cast<double>(k), 1.5));
  }
  return paoi::SystemModel::make(std::move(svc), std::move(cost), paoi::RateBox(0.01, 5), d);
}

void BM_PaoiMg1(benchmark::State& state) {
  const auto m = wide(static_cast<std::size_t>(state.range(0)), paoi::Discipline::MG1);
  const paoi::RateVector r(std::vector<double>(m.size(), 0.5 / static_cast<double>(m.size())));
  for (auto _ : state) benchmark::DoNotOptimize(paoi::paoi_mg1(m, r));
}
BENCHMARK(BM_PaoiMg1)->Arg(2)->Arg(8)->Arg(64);

void BM_PaoiMg11Recursive(benchmark::State& state) {
  const auto m = wide(static_cast<std::size_t>(state.range(0)), paoi::Discipline::MG11);
  const paoi::RateVector r(std::vector<double>(m.size(), 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(paoi::paoi_mg11_recursive(m, r));
}
BENCHMARK(BM_PaoiMg11Recursive)->Arg(2)->Arg(8)->Arg(64);

void BM_OptimizeMg11(benchmark::State& state) {
  const auto m = wide(static_cast<std::size_t>(state.range(0)), paoi::Discipline::MG11);
  for (auto _ : state) benchmark::DoNotOptimize(paoi::optimize_mg11(m));
}
BENCHMARK(BM_OptimizeMg11)->Arg(2)->Arg(16)->Arg(128);

void BM_OptimizeSurrogate(benchmark::State& state) {
  const auto m = example(paoi::Discipline::MG1);
  for (auto _ : state) benchmark::DoNotOptimize(paoi::optimize_mg1_surrogate(m));
}
BENCHMARK(BM_OptimizeSurrogate);

void BM_GridSearch(benchmark::State& state) {
  const auto m = example(paoi::Discipline::MG1);
  paoi::GridSettings g;
  g.points_per_dimension = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(paoi::grid_search(m, g));
}
BENCHMARK(BM_GridSearch)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto m = example(paoi::Discipline::MG1);
  const paoi::RateVector r({0.29, 0.125});
  paoi::SimConfig cfg;
  cfg.horizon = static_cast<double>(state.range(0));
  cfg.replications = 1;
  std::size_t events = 0;
  for (auto _ : state) {
    const auto est = paoi::simulate(m, r, cfg);
    events += est.classes[0].delivered + est.classes[1].delivered;
  }
  state.counters["deliveries/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
