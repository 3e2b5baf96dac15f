#include "poacert/equilibria.hpp"

#include <algorithm>
#include <numeric>

#include "poacert/generators.hpp"

namespace poacert {

namespace {

template <typename CostFn, typename DevFn>
EquilibriumReport check_impl(int players, const std::vector<int>& strategy_counts, CostFn cost_of,
                             DevFn deviation_of, double tol) {
  EquilibriumReport rep;
  for (int j = 0; j < players; ++j) {
    const double cj = cost_of(j);
    for (int i = 0; i < strategy_counts[j]; ++i) {
      const double dev = deviation_of(j, i);
      const double violation = std::max(0.0, cj - dev) / std::max(1.0, cj);
      if (violation > rep.max_violation) {
        rep.max_violation = violation;
        rep.worst_player = j;
        rep.worst_strategy = i;
      }
    }
  }
  rep.is_equilibrium = rep.max_violation <= tol;
  return rep;
}

template <typename Instance>
std::vector<int> strategy_counts(const Instance& inst) {
  std::vector<int> counts(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j) counts[j] = inst.strategy_count(j);
  return counts;
}

}  // namespace

EquilibriumReport check_equilibrium(const CongestionInstance& inst, const Assignment& x,
                                    Mechanism m, double tol) {
  const CostBreakdown c = social_cost(inst, x, m);
  return check_impl(
      inst.player_count(), strategy_counts(inst), [&](int j) { return c.per_player[j]; },
      [&](int j, int i) { return deviation_cost(inst, x, j, i, m, /*literal=*/false); }, tol);
}

EquilibriumReport check_equilibrium(const AffineInstance& inst, const Assignment& x, double tol) {
  const CostBreakdown c = affine_cost(inst, x);
  return check_impl(
      inst.player_count(), strategy_counts(inst), [&](int j) { return c.per_player[j]; },
      [&](int j, int i) { return affine_deviation_cost(inst, x, j, i); }, tol);
}

EquilibriumReport check_cce(const CongestionInstance& inst, const ProfileDistribution& sigma,
                            Mechanism m, double tol) {
  check_distribution(inst, sigma);
  const int n = inst.player_count();
  std::vector<double> expected_cost(n, 0.0);
  std::vector<std::vector<double>> expected_dev(n);
  for (int j = 0; j < n; ++j) expected_dev[j].assign(inst.strategy_count(j), 0.0);
  for (const auto& [x, p] : sigma.support) {
    if (p == 0.0) continue;
    const CostBreakdown c = social_cost(inst, x, m);
    for (int j = 0; j < n; ++j) {
      expected_cost[j] += p * c.per_player[j];
      for (int i = 0; i < inst.strategy_count(j); ++i)
        expected_dev[j][i] += p * deviation_cost(inst, x, j, i, m, /*literal=*/false);
    }
  }
  return check_impl(
      n, strategy_counts(inst), [&](int j) { return expected_cost[j]; },
      [&](int j, int i) { return expected_dev[j][i]; }, tol);
}

DynamicsResult best_response_dynamics(const CongestionInstance& inst, Mechanism m,
                                      const Assignment& init, int max_iters, SweepPolicy policy,
                                      std::uint64_t seed, double tol) {
  check_assignment(inst, init);
  if (!init.is_pure()) fail("MixedAssignmentUnsupported", "dynamics require a pure start");
  const int n = inst.player_count();
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = init.choice(j);

  SplitMix64 rng(seed);
  DynamicsResult out{init, false, 0};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  while (out.moves < max_iters) {
    if (policy == SweepPolicy::SeededRandom) {
      for (int j = n - 1; j > 0; --j) std::swap(order[j], order[rng.below(j + 1)]);
    }
    bool moved = false;
    for (int idx = 0; idx < n && out.moves < max_iters; ++idx) {
      const int j = order[idx];
      Assignment x = Assignment::pure_for(inst, choice);
      const double cj = deviation_cost(inst, x, j, choice[j], m, /*literal=*/false);
      for (int i = 0; i < inst.strategy_count(j); ++i) {
        if (i == choice[j]) continue;
        const double dev = deviation_cost(inst, x, j, i, m, /*literal=*/false);
        if (cj - dev > tol * std::max(1.0, cj)) {
          choice[j] = i;
          ++out.moves;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      out.converged = true;
      break;
    }
  }
  out.x = Assignment::pure_for(inst, choice);
  return out;
}

}  // namespace poacert
