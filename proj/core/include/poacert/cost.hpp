#ifndef POACERT_COST_HPP
#define POACERT_COST_HPP

#include <string>
#include <vector>

#include "poacert/model.hpp"

namespace poacert {

/// The per-resource local policy deciding how co-located players are processed.
enum class Mechanism { SmithRule, ProportionalSharing, Rand };

std::string to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

struct CostBreakdown {
  double social = 0.0;
  std::vector<double> per_player;  // C_j(x)
  std::vector<double> weighted;    // w_j C_j(x)
  /// Weighted sum of processing times of the chosen strategies.
  double eta = 0.0;
  /// D_j(x): weighted delay player j imposes on later-ordered players.
  std::vector<double> delay;
};

/// Probability that a player with Smith ratio `a` is ordered after one with
/// ratio `b` under Rand; 1/2 in the symmetric 0/0 limit.
inline double rand_after_prob(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.5;
  return a / (a + b);
}

/// Expected per-player and social cost under the chosen mechanism. Mixed
/// assignments are interpreted as independent randomization, matching the
/// closed-form expectation formulas.
CostBreakdown social_cost(const CongestionInstance& inst, const Assignment& x, Mechanism m);

/// Cost player j would incur by playing strategy i.
///
/// literal=false evaluates C_j(x_{-j}, i) exactly: j is removed from x and its
/// cost on i is computed against the other players' marginals. literal=true
/// evaluates the right-hand side of the equilibrium display the dual fittings
/// consume; for ProportionalSharing this is the min{delta,delta} form, which
/// additionally counts j's own current usage on shared resources.
double deviation_cost(const CongestionInstance& inst, const Assignment& x, int j, int i,
                      Mechanism m, bool literal);

/// Loads, per-player and social cost of a weighted affine congestion game
/// (pure assignments only).
CostBreakdown affine_cost(const AffineInstance& inst, const Assignment& x);

/// Exact deviation cost of player j switching to strategy i in an affine game.
double affine_deviation_cost(const AffineInstance& inst, const Assignment& x, int j, int i);

/// Loads per resource for a pure assignment.
std::vector<double> affine_loads(const AffineInstance& inst, const Assignment& x);

}  // namespace poacert

#endif
