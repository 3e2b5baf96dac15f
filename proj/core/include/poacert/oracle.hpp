#ifndef POACERT_ORACLE_HPP
#define POACERT_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "poacert/cost.hpp"
#include "poacert/model.hpp"

namespace poacert {

struct BruteForceResult {
  double value = 0.0;
  std::vector<int> argmin;  // strategy choice per player
};

/// Exact minimum social cost over all pure profiles. Throws
/// SearchSpaceTooLarge when the profile count exceeds the cap.
BruteForceResult brute_force_opt(const CongestionInstance& inst, Mechanism m,
                                 std::uint64_t cap = 2'000'000);
BruteForceResult brute_force_opt(const AffineInstance& inst, std::uint64_t cap = 2'000'000);

/// All pure profiles passing check_equilibrium at the tolerance; may be empty.
std::vector<std::vector<int>> enumerate_pure_equilibria(const CongestionInstance& inst,
                                                        Mechanism m, double tol = 1e-9,
                                                        std::uint64_t cap = 2'000'000);
std::vector<std::vector<int>> enumerate_pure_equilibria(const AffineInstance& inst,
                                                        double tol = 1e-9,
                                                        std::uint64_t cap = 2'000'000);

struct OracleReport {
  double opt_value = 0.0;
  std::vector<int> opt_profile;
  /// Equilibria with their social costs under the mechanism.
  std::vector<std::pair<std::vector<int>, double>> equilibria;
  double worst_equilibrium_cost = 0.0;
  /// Worst NE cost divided by OPT under Smith's Rule.
  double coordination_ratio = 0.0;
  /// Worst NE cost divided by OPT under the same mechanism.
  double price_of_anarchy = 0.0;
};

/// Enumerates equilibria and optima and reports both ratios; throws
/// NoEquilibriumFound when no pure equilibrium exists at the tolerance.
OracleReport ratio_report(const CongestionInstance& inst, Mechanism m,
                          std::uint64_t cap = 2'000'000, double tol = 1e-9);

}  // namespace poacert

#endif
