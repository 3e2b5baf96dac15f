#include <benchmark/benchmark.h>

#include "poacert/cost.hpp"
#include "poacert/equilibria.hpp"
#include "poacert/generators.hpp"

using namespace poacert;

static void BM_SocialCost(benchmark::State& state) {
  RandomProfile prof;
  prof.players = static_cast<int>(state.range(0));
  prof.resources = 8;
  prof.max_strategy_size = 3;
  const CongestionInstance inst = gen_random(7, prof);
  SplitMix64 rng(11);
  std::vector<int> choice(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
  const Assignment x = Assignment::pure_for(inst, choice);
  for (auto _ : state)
    benchmark::DoNotOptimize(social_cost(inst, x, Mechanism::SmithRule).social);
}
BENCHMARK(BM_SocialCost)->Arg(8)->Arg(32)->Arg(128);

static void BM_EquilibriumCheck(benchmark::State& state) {
  RandomProfile prof;
  prof.players = static_cast<int>(state.range(0));
  prof.resources = 8;
  const CongestionInstance inst = gen_random(9, prof);
  const Assignment x =
      Assignment::pure_for(inst, std::vector<int>(inst.player_count(), 0));
  for (auto _ : state)
    benchmark::DoNotOptimize(check_equilibrium(inst, x, Mechanism::Rand).max_violation);
}
BENCHMARK(BM_EquilibriumCheck)->Arg(8)->Arg(32);
