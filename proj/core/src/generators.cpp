#include "poacert/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace poacert {

double gamma_potential_constant() { return (9.0 + std::sqrt(5.0)) / 19.0; }

LowerBoundLS gen_lower_bound_ls(int n) {
  if (n < 2) fail("InvalidParams", "lower-bound family needs n >= 2");
  const double gamma = gamma_potential_constant();
  const double lambda = (gamma + std::sqrt(gamma * gamma + 4.0)) / 2.0;

  // Job 1 carries weight 1 and processing lambda^2 on both of its machines;
  // this keeps machine 2's Smith ratio at lambda^2, so job 2's move onto it
  // ties at f = 1 + gamma*lambda = lambda^2 instead of strictly improving.
  std::vector<std::string> ids(n);
  std::vector<double> weights(n);
  std::vector<std::vector<std::pair<int, double>>> feasible(n);
  for (int j = 0; j < n; ++j) {
    ids[j] = "j" + std::to_string(j + 1);
    weights[j] = std::pow(lambda, -j);  // 1, 1/lambda, 1/lambda^2, ...
    if (j == 0) {
      feasible[j] = {{0, lambda * lambda}, {1, lambda * lambda}};
    } else {
      // own machine j: w_j * p = 1; next machine j+1: w_j * p = lambda^2
      feasible[j] = {{j, std::pow(lambda, j)}, {j + 1, std::pow(lambda, j + 2)}};
    }
  }
  LowerBoundLS out{make_scheduling_instance(n + 1, ids, weights, feasible),
                   Assignment::pure(std::vector<int>(n, 1), std::vector<int>(n, 2)),
                   Assignment::pure(std::vector<int>(n, 0), std::vector<int>(n, 2)),
                   lambda,
                   n * lambda * lambda,
                   lambda * lambda + (n - 1)};
  return out;
}

double kk_opt_cost(const KKParams& p) {
  const double m = p.machines, k = p.large_jobs, q = p.large_size;
  const double alpha = m / (m - k);
  if (q >= alpha) return k * q * q + (m - k) / 2.0 * alpha * alpha;
  const double beta = (m + q * k) / m;
  return 0.5 * (k * q * q + m * beta * beta);
}

KKInstance gen_kk(const KKParams& params) {
  if (params.machines < 2 || params.large_jobs < 1 || params.large_jobs >= params.machines ||
      params.large_size <= 0 || params.small_size <= 0)
    fail("InvalidParams", "kk family needs m >= 2, 1 <= k < m, p > 0, eps > 0");
  const int m = params.machines;
  // Small-job count rounded to a multiple of m so every machine carries
  // exactly one unit of small workload; eps recomputed to keep the total at m.
  const int per_machine = static_cast<int>(std::llround(1.0 / params.small_size));
  if (per_machine < 1) fail("InvalidParams", "eps too large: fewer small jobs than machines");
  const int small = m * per_machine;
  KKParams actual = params;
  actual.small_size = 1.0 / per_machine;

  const int n = small + params.large_jobs;
  std::vector<std::string> ids(n);
  std::vector<double> weights(n);
  std::vector<std::vector<std::pair<int, double>>> feasible(n);
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) {
    const bool is_large = j >= small;
    const double size = is_large ? params.large_size : actual.small_size;
    ids[j] = (is_large ? "L" : "s") + std::to_string(is_large ? j - small : j);
    weights[j] = size;  // w_j = p_j after the reduction
    feasible[j].reserve(m);
    for (int i = 0; i < m; ++i) feasible[j].push_back({i, size});
    // Nash profile: small jobs round-robin over machines (each machine gets
    // exactly one unit of small workload), large jobs on distinct machines.
    choice[j] = is_large ? (j - small) % m : j % m;
  }
  KKInstance out{make_scheduling_instance(m, ids, weights, feasible),
                 actual,
                 Assignment::pure(choice, std::vector<int>(n, m)),
                 small,
                 kk_opt_cost(actual),
                 params.large_size >= static_cast<double>(m) / (m - params.large_jobs)};
  return out;
}

namespace {

std::vector<std::vector<int>> random_strategies(SplitMix64& rng, int resources, int max_strategies,
                                                int max_strategy_size) {
  const int count = 1 + rng.below(max_strategies);
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (int t = 0; t < count; ++t) {
    const int size = 1 + rng.below(std::min(max_strategy_size, resources));
    std::set<int> picks;
    while (static_cast<int>(picks.size()) < size) picks.insert(rng.below(resources));
    std::vector<int> s(picks.begin(), picks.end());
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

CongestionInstance gen_random(std::uint64_t seed, const RandomProfile& profile) {
  if (profile.players < 1 || profile.resources < 1 || profile.max_strategies < 1 ||
      profile.max_strategy_size < 1 || profile.weight_lo <= 0 || profile.proc_lo < 0)
    fail("InvalidParams", "invalid random profile");
  SplitMix64 rng(seed);
  using Kind = RandomProfile::Kind;
  const bool scheduling = profile.kind != Kind::Congestion;

  std::vector<std::string> resources(profile.resources);
  for (int e = 0; e < profile.resources; ++e) resources[e] = "e" + std::to_string(e);

  // Uniform-ratio mode: rates and weights come from exact dyadic grids so
  // that p_ej / w_j == lambda_e without rounding.
  std::vector<double> rate(profile.resources, 0.0);
  if (profile.kind == Kind::UniformRatio)
    for (double& r : rate) r = 0.5 * (1 + rng.below(8));

  std::vector<RawPlayer> players(profile.players);
  for (int j = 0; j < profile.players; ++j) {
    auto& pl = players[j];
    pl.id = "p" + std::to_string(j);
    pl.weight = profile.kind == Kind::UniformRatio
                    ? std::exp2(rng.below(4))  // 1, 2, 4, 8
                    : rng.uniform(profile.weight_lo, profile.weight_hi);
    pl.processing.assign(profile.resources, std::numeric_limits<double>::quiet_NaN());
    if (scheduling) {
      const int machines = 1 + rng.below(std::min(profile.max_strategies, profile.resources));
      std::set<int> picks;
      while (static_cast<int>(picks.size()) < machines) picks.insert(rng.below(profile.resources));
      const double uniform_p = rng.uniform(profile.proc_lo, profile.proc_hi);
      for (int e : picks) {
        pl.strategies.push_back({e});
        switch (profile.kind) {
          case Kind::Scheduling: pl.processing[e] = rng.uniform(profile.proc_lo, profile.proc_hi); break;
          case Kind::UniformRatio: pl.processing[e] = rate[e] * pl.weight; break;
          case Kind::RestrictedIdentical: pl.processing[e] = uniform_p; break;
          case Kind::Congestion: break;
        }
      }
    } else {
      pl.strategies = random_strategies(rng, profile.resources, profile.max_strategies,
                                        profile.max_strategy_size);
      for (const auto& s : pl.strategies)
        for (int e : s)
          if (std::isnan(pl.processing[e]))
            pl.processing[e] = rng.uniform(profile.proc_lo, profile.proc_hi);
    }
  }
  return CongestionInstance(std::move(resources), std::move(players));
}

AffineInstance gen_random_affine(std::uint64_t seed, const RandomAffineProfile& profile) {
  if (profile.players < 1 || profile.resources < 1) fail("InvalidParams", "invalid affine profile");
  SplitMix64 rng(seed);
  std::vector<AffineResource> resources(profile.resources);
  for (int e = 0; e < profile.resources; ++e) {
    resources[e].id = "r" + std::to_string(e);
    resources[e].a = rng.uniform(profile.a_lo, profile.a_hi);
    resources[e].b = rng.uniform(profile.b_lo, profile.b_hi);
  }
  std::vector<RawAffinePlayer> players(profile.players);
  for (int j = 0; j < profile.players; ++j) {
    auto& pl = players[j];
    pl.id = "p" + std::to_string(j);
    pl.strategies = random_strategies(rng, profile.resources, profile.max_strategies,
                                      profile.max_strategy_size);
    pl.resource_weights.assign(profile.resources, std::numeric_limits<double>::quiet_NaN());
    for (const auto& s : pl.strategies)
      for (int e : s)
        if (std::isnan(pl.resource_weights[e]))
          pl.resource_weights[e] = rng.uniform(profile.weight_lo, profile.weight_hi);
  }
  return AffineInstance(std::move(resources), std::move(players));
}

}  // namespace poacert
