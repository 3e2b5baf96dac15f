#include "poacert/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "poacert/equilibria.hpp"

namespace poacert {

namespace {

std::uint64_t profile_count(const std::vector<int>& counts, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int c : counts) {
    total *= static_cast<std::uint64_t>(c);
    if (total > cap)
      fail("SearchSpaceTooLarge", "profile space exceeds the cap of " + std::to_string(cap));
  }
  return total;
}

/// Mixed-radix counter over strategy indices; calls fn for every pure profile.
template <typename Fn>
void for_each_profile(const std::vector<int>& counts, Fn&& fn) {
  std::vector<int> choice(counts.size(), 0);
  while (true) {
    fn(choice);
    int pos = static_cast<int>(counts.size()) - 1;
    while (pos >= 0) {
      if (++choice[pos] < counts[pos]) break;
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

/// Per-resource social cost contribution of the player subset using it,
/// memoized by bitmask when the player count allows.
class ResourceCostTable {
 public:
  ResourceCostTable(const CongestionInstance& inst, Mechanism m) : inst_(inst), m_(m) {
    if (inst.player_count() <= 20)
      cache_.assign(inst.resource_count(),
                    std::vector<double>(1u << inst.player_count(), -1.0));
  }

  double cost(int e, std::uint32_t mask) {
    if (cache_.empty()) return compute(e, mask);
    double& slot = cache_[e][mask];
    if (slot < 0.0) slot = compute(e, mask);
    return slot;
  }

 private:
  double compute(int e, std::uint32_t mask) const {
    double total = 0.0;
    for (int j = 0; j < inst_.player_count(); ++j) {
      if (!(mask & (1u << j))) continue;
      double cj = inst_.processing(e, j);
      for (int k = 0; k < inst_.player_count(); ++k) {
        if (k == j || !(mask & (1u << k))) continue;
        switch (m_) {
          case Mechanism::SmithRule:
            if (inst_.precedes(e, k, j)) cj += inst_.processing(e, k);
            break;
          case Mechanism::ProportionalSharing:
            if (inst_.precedes(e, k, j))
              cj += inst_.processing(e, k);
            else
              cj += inst_.weight(k) * inst_.smith_ratio(e, j);
            break;
          case Mechanism::Rand:
            cj += rand_after_prob(inst_.smith_ratio(e, j), inst_.smith_ratio(e, k)) *
                  inst_.processing(e, k);
            break;
        }
      }
      total += inst_.weight(j) * cj;
    }
    return total;
  }

  const CongestionInstance& inst_;
  Mechanism m_;
  std::vector<std::vector<double>> cache_;
};

std::vector<int> counts_of(const CongestionInstance& inst) {
  std::vector<int> counts(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j) counts[j] = inst.strategy_count(j);
  return counts;
}

}  // namespace

BruteForceResult brute_force_opt(const CongestionInstance& inst, Mechanism m, std::uint64_t cap) {
  const std::vector<int> counts = counts_of(inst);
  profile_count(counts, cap);
  ResourceCostTable table(inst, m);
  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> mask(inst.resource_count());
  for_each_profile(counts, [&](const std::vector<int>& choice) {
    std::fill(mask.begin(), mask.end(), 0u);
    for (int j = 0; j < inst.player_count(); ++j)
      for (int e : inst.strategy(j, choice[j])) mask[e] |= 1u << j;
    double total = 0.0;
    for (int e = 0; e < inst.resource_count(); ++e)
      if (mask[e]) total += table.cost(e, mask[e]);
    if (total < best.value) {
      best.value = total;
      best.argmin = choice;
    }
  });
  return best;
}

BruteForceResult brute_force_opt(const AffineInstance& inst, std::uint64_t cap) {
  std::vector<int> counts(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j) counts[j] = inst.strategy_count(j);
  profile_count(counts, cap);
  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<double> load(inst.resource_count());
  for_each_profile(counts, [&](const std::vector<int>& choice) {
    std::fill(load.begin(), load.end(), 0.0);
    for (int j = 0; j < inst.player_count(); ++j)
      for (int e : inst.strategy(j, choice[j])) load[e] += inst.resource_weight(e, j);
    double total = 0.0;
    for (int e = 0; e < inst.resource_count(); ++e)
      total += inst.a(e) * load[e] * load[e] + inst.b(e) * load[e];
    if (total < best.value) {
      best.value = total;
      best.argmin = choice;
    }
  });
  return best;
}

std::vector<std::vector<int>> enumerate_pure_equilibria(const CongestionInstance& inst,
                                                        Mechanism m, double tol,
                                                        std::uint64_t cap) {
  const std::vector<int> counts = counts_of(inst);
  profile_count(counts, cap);
  std::vector<std::vector<int>> out;
  for_each_profile(counts, [&](const std::vector<int>& choice) {
    const Assignment x = Assignment::pure(choice, counts);
    if (check_equilibrium(inst, x, m, tol).is_equilibrium) out.push_back(choice);
  });
  return out;
}

std::vector<std::vector<int>> enumerate_pure_equilibria(const AffineInstance& inst, double tol,
                                                        std::uint64_t cap) {
  std::vector<int> counts(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j) counts[j] = inst.strategy_count(j);
  profile_count(counts, cap);
  std::vector<std::vector<int>> out;
  for_each_profile(counts, [&](const std::vector<int>& choice) {
    const Assignment x = Assignment::pure(choice, counts);
    if (check_equilibrium(inst, x, tol).is_equilibrium) out.push_back(choice);
  });
  return out;
}

OracleReport ratio_report(const CongestionInstance& inst, Mechanism m, std::uint64_t cap,
                          double tol) {
  OracleReport rep;
  const BruteForceResult opt = brute_force_opt(inst, m, cap);
  rep.opt_value = opt.value;
  rep.opt_profile = opt.argmin;

  const std::vector<int> counts = counts_of(inst);
  for (const auto& choice : enumerate_pure_equilibria(inst, m, tol, cap)) {
    const double cost = social_cost(inst, Assignment::pure(choice, counts), m).social;
    rep.equilibria.push_back({choice, cost});
    rep.worst_equilibrium_cost = std::max(rep.worst_equilibrium_cost, cost);
  }
  if (rep.equilibria.empty())
    fail("NoEquilibriumFound", "no pure equilibrium exists; the ratios are undefined");

  const double smith_opt =
      m == Mechanism::SmithRule ? opt.value : brute_force_opt(inst, Mechanism::SmithRule, cap).value;
  rep.coordination_ratio = smith_opt > 0 ? rep.worst_equilibrium_cost / smith_opt : 1.0;
  rep.price_of_anarchy = opt.value > 0 ? rep.worst_equilibrium_cost / opt.value : 1.0;
  return rep;
}

}  // namespace poacert
