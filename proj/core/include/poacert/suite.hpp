#ifndef POACERT_SUITE_HPP
#define POACERT_SUITE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace poacert {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  bool all_pass = true;
};

/// Runs the full verification battery: constant identities, primal
/// consistency, fitting feasibility and objective bounds over seeded
/// equilibrium batches, weak duality against the brute-force oracle, local
/// search and online-greedy certificates, the named instance families,
/// embedding fidelity, and the coarse-correlated extension. Deterministic
/// given the seed. One line per criterion is written to `log` when non-null.
SuiteResult run_acceptance(std::uint64_t seed = 42, std::ostream* log = nullptr);

}  // namespace poacert

#endif
