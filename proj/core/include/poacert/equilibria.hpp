#ifndef POACERT_EQUILIBRIA_HPP
#define POACERT_EQUILIBRIA_HPP

#include <cstdint>
#include <vector>

#include "poacert/cost.hpp"
#include "poacert/model.hpp"

namespace poacert {

struct EquilibriumReport {
  double max_violation = 0.0;
  int worst_player = -1;
  int worst_strategy = -1;
  bool is_equilibrium = true;
};

/// Checks the Nash conditions C_j(x) <= C_j(x_{-j}, i) with exact deviation
/// costs. Violation for (j,i) is max(0, C_j - C_j(x_{-j},i)) / max(1, C_j).
EquilibriumReport check_equilibrium(const CongestionInstance& inst, const Assignment& x,
                                    Mechanism m, double tol = 1e-9);
EquilibriumReport check_equilibrium(const AffineInstance& inst, const Assignment& x,
                                    double tol = 1e-9);

/// Distribution over pure profiles.
struct ProfileDistribution {
  std::vector<std::pair<Assignment, double>> support;
};

template <typename Instance>
void check_distribution(const Instance& inst, const ProfileDistribution& sigma) {
  if (sigma.support.empty()) fail("EmptySupport", "distribution has empty support");
  double total = 0.0;
  for (const auto& [x, p] : sigma.support) {
    if (p < 0) fail("NegativeValue", "distribution has a negative probability");
    if (!x.is_pure()) fail("MixedAssignmentUnsupported", "CCE support must be pure profiles");
    check_assignment(inst, x);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail("DimensionMismatch", "distribution probabilities sum to " + std::to_string(total));
}

/// Coarse-correlated equilibrium check: E[C_j(X)] <= E[C_j(X_{-j}, i)] by exact
/// expectation over the support.
EquilibriumReport check_cce(const CongestionInstance& inst, const ProfileDistribution& sigma,
                            Mechanism m, double tol = 1e-9);

enum class SweepPolicy { RoundRobin, SeededRandom };

struct DynamicsResult {
  Assignment x;
  bool converged = false;
  int moves = 0;
};

/// Iterated best-response-style improvement dynamics over pure profiles: a
/// player moves to the first strategy improving its exact cost by more than
/// tol * max(1, C_j). converged=true implies check_equilibrium passes at tol.
DynamicsResult best_response_dynamics(const CongestionInstance& inst, Mechanism m,
                                      const Assignment& init, int max_iters,
                                      SweepPolicy policy = SweepPolicy::RoundRobin,
                                      std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace poacert

#endif
