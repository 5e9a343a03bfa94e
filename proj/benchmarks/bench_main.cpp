#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "tzlab/atpg.hpp"
#include "tzlab/attack.hpp"
#include "tzlab/logicsim.hpp"
#include "tzlab/probability.hpp"

using namespace tzlab;

namespace {

const Netlist& circuit(const std::string& name) {
  static std::map<std::string, Netlist> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, read_bench_file(std::string(TZLAB_DATA_DIR) + "/iscas85/" + name + ".bench")).first;
  return it->second;
}

void BM_SimulateComb(benchmark::State& state) {
  const auto& n = circuit("c880");
  const auto p = PatternBlock::random(n.inputs().size(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_comb(n, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateComb)->Arg(1 << 10)->Arg(1 << 16);

void BM_FaultSimulate(benchmark::State& state) {
  const auto& n = circuit(state.range(0) ? "c880" : "c432");
  const auto faults = collapse_equivalent_faults(n, enumerate_faults(n));
  const auto p = PatternBlock::random(n.inputs().size(), 1024, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fault_simulate(n, p, faults));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(faults.size()) * 1024);
}
BENCHMARK(BM_FaultSimulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto& n = circuit("c880");
  for (auto _ : state) benchmark::DoNotOptimize(propagate(n));
}
BENCHMARK(BM_Propagate);

void BM_MonteCarlo(benchmark::State& state) {
  const auto& n = circuit("c880");
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_probs(n, 1 << 20, 3));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

void BM_GenerateTests(benchmark::State& state) {
  const auto& n = circuit("c880");
  for (auto _ : state) benchmark::DoNotOptimize(generate_tests(n, {}));
}
BENCHMARK(BM_GenerateTests)->Unit(benchmark::kMillisecond);

void BM_Salvage(benchmark::State& state) {
  const auto& n = circuit("c880");
  DefenderProfile d;
  d.suites.push_back(generate_tests(n, {}));
  const Workload w{"w", PatternBlock::random(n.inputs().size(), 4096, 4)};
  const auto lib = CellLibrary::default_library();
  for (auto _ : state) benchmark::DoNotOptimize(salvage(n, d, lib, w));
}
BENCHMARK(BM_Salvage)->Unit(benchmark::kMillisecond);

void BM_TriggerProb(benchmark::State& state) {
  const auto& n = circuit("c880");
  const Location loc{{"N522"}, {false}, "N879", 1.0 / 1024};
  const auto [infected, inst] = place_ht(n, {TemplateKind::Counter, 3, 1}, loc);
  for (auto _ : state) benchmark::DoNotOptimize(trigger_prob(infected, inst, loc.p_event, 1000, 1 << 14, 5));
  state.SetItemsProcessed(state.iterations() * (1 << 14));
}
BENCHMARK(BM_TriggerProb)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
