#include <benchmark/benchmark.h>

#include <numeric>

#include "poacert/generators.hpp"
#include "poacert/online.hpp"

using namespace poacert;

static void BM_GreedyOnline(benchmark::State& state) {
  RandomProfile prof;
  prof.kind = RandomProfile::Kind::Scheduling;
  prof.players = static_cast<int>(state.range(0));
  prof.resources = 16;
  prof.max_strategies = 16;
  const CongestionInstance inst = gen_random(3, prof);
  std::vector<int> order(inst.player_count());
  std::iota(order.begin(), order.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_online(inst, order).cumulative.back());
}
BENCHMARK(BM_GreedyOnline)->Arg(32)->Arg(128)->Arg(512);
