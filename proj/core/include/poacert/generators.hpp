#ifndef POACERT_GENERATORS_HPP
#define POACERT_GENERATORS_HPP

#include <cstdint>

#include "poacert/model.hpp"

namespace poacert {

/// splitmix64: the 64-bit PRNG every seeded generator in this project uses.
/// Pinned so instances reproduce bit-exactly across platforms and languages.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

/// The local-search lower-bound family: n jobs on n+1 machines, job j feasible
/// on machines {j, j+1}, built so that the shifted profile (job j on machine
/// j+1) is a gamma-potential local optimum of cost n*lambda^2 while the
/// diagonal profile costs lambda^2 + (n-1).
struct LowerBoundLS {
  CongestionInstance instance;
  Assignment shifted;    // job j -> machine j+1, certified local optimum
  Assignment canonical;  // job j -> machine j, the cheap diagonal profile
  double lambda;         // positive root of lambda^2 = 1 + gamma*lambda
  double shifted_cost;   // n * lambda^2
  double canonical_cost; // lambda^2 + (n-1)
};

LowerBoundLS gen_lower_bound_ls(int n);

/// Parameters of the two-size reduced scheduling instances: m identical
/// machines, k large jobs of size p, and m/eps small jobs of size eps with
/// total small workload exactly m. All jobs have w_j = p_j.
struct KKParams {
  int machines = 2;
  int large_jobs = 1;
  double large_size = 2.0;
  double small_size = 0.01;
};

struct KKInstance {
  CongestionInstance instance;
  KKParams params;      // with small_size recomputed so workload is exact
  Assignment nash;      // small jobs fill [0,1] per machine, large jobs start at 1
  int small_jobs = 0;   // declared before the large jobs
  double opt_cost = 0;  // closed-form optimal cost of the reduced instance
  bool high_p = false;  // true when p >= m/(m-k)
};

KKInstance gen_kk(const KKParams& params);

/// Closed-form optimal cost of the reduced instance (case split at p = m/(m-k)).
double kk_opt_cost(const KKParams& params);

struct RandomProfile {
  enum class Kind { Congestion, Scheduling, UniformRatio, RestrictedIdentical };
  Kind kind = Kind::Congestion;
  int players = 3;
  int resources = 3;
  int max_strategies = 3;
  int max_strategy_size = 2;
  double weight_lo = 0.5, weight_hi = 2.0;
  double proc_lo = 0.5, proc_hi = 3.0;
};

/// Deterministic given the seed. UniformRatio instances use power-of-two
/// weights and dyadic rates so p_ej / w_j reproduces lambda_e exactly.
CongestionInstance gen_random(std::uint64_t seed, const RandomProfile& profile);

struct RandomAffineProfile {
  int players = 3;
  int resources = 3;
  int max_strategies = 3;
  int max_strategy_size = 2;
  double a_lo = 0.0, a_hi = 2.0;
  double b_lo = 0.0, b_hi = 1.0;
  double weight_lo = 0.5, weight_hi = 2.0;
};

AffineInstance gen_random_affine(std::uint64_t seed, const RandomAffineProfile& profile);

/// gamma = (9 + sqrt(5)) / 19, the potential constant of the improved local search.
double gamma_potential_constant();

}  // namespace poacert

#endif
