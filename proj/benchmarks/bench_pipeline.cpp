#include <benchmark/benchmark.h>

#include <random>

#include "actorlens/cohort.hpp"
#include "actorlens/detect.hpp"
#include "actorlens/metrics.hpp"
#include "actorlens/projection.hpp"
#include "actorlens/synth.hpp"

using namespace actorlens;

namespace {

const Corpus& corpus() {
  static const Corpus c = generate_corpus(60, parse_mix("normal=0.8,afk=0.1,feeder=0.1"), 1);
  return c;
}

void BM_SynthMatch(benchmark::State& state) {
  const std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_match(scripts, state.range(0), ++seed));
}
BENCHMARK(BM_SynthMatch)->Arg(900)->Arg(1800);

void BM_FilterLowLevel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(filter_low_level(corpus().matches));
  state.SetItemsProcessed(state.iterations() * 600);
}
BENCHMARK(BM_FilterLowLevel);

void BM_MetricVectors(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& m : corpus().matches) {
      for (std::size_t p = 0; p < 10; ++p) benchmark::DoNotOptimize(metric_vector(m, p));
    }
  }
  state.SetItemsProcessed(state.iterations() * 600);
}
BENCHMARK(BM_MetricVectors);

void BM_Progression(benchmark::State& state) {
  std::vector<MemberSeries> members;
  for (const auto& m : corpus().matches) {
    for (std::size_t p = 0; p < 10; ++p) members.push_back(member_series(m, p));
  }
  for (auto _ : state) benchmark::DoNotOptimize(progression_summary(members));
}
BENCHMARK(BM_Progression);

void BM_Embed(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> value(0, 12);
  std::vector<MetricArray> data(static_cast<std::size_t>(state.range(0)));
  for (auto& v : data) {
    for (auto& x : v) x = value(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(embed(data));
}
BENCHMARK(BM_Embed)->Arg(100)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
