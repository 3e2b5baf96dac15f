#ifndef POACERT_MODEL_HPP
#define POACERT_MODEL_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "poacert/errors.hpp"

namespace poacert {

/// Raw player description as it comes out of a parser. `processing[e]` must be
/// set (finite, >= 0) for every resource index e referenced by a strategy;
/// unreferenced entries may stay NaN.
struct RawPlayer {
  std::string id;
  double weight = 0.0;
  std::vector<std::vector<int>> strategies;
  std::vector<double> processing;  // dense over resources, NaN = undefined
};

/// A congestion game: players pick resource subsets, every resource processes
/// its users under a coordination mechanism. Immutable after validation.
class CongestionInstance {
 public:
  CongestionInstance(std::vector<std::string> resources, std::vector<RawPlayer> players);

  int resource_count() const { return static_cast<int>(resources_.size()); }
  int player_count() const { return static_cast<int>(players_.size()); }

  const std::string& resource_id(int e) const { return resources_[e]; }
  const std::string& player_id(int j) const { return players_[j].id; }
  double weight(int j) const { return players_[j].weight; }
  const std::vector<std::vector<int>>& strategies(int j) const { return players_[j].strategies; }
  const std::vector<int>& strategy(int j, int i) const { return players_[j].strategies[i]; }
  int strategy_count(int j) const { return static_cast<int>(players_[j].strategies.size()); }

  bool defined(int e, int j) const { return std::isfinite(players_[j].processing[e]); }
  double processing(int e, int j) const { return players_[j].processing[e]; }

  /// Smith ratio p_ej / w_j; 0 for zero-weight players (they precede everyone
  /// and contribute zero weighted cost).
  double smith_ratio(int e, int j) const { return smith_[j][e]; }

  /// Strict total order on the players of a resource: smaller Smith ratio
  /// first, declaration index breaking ties.
  bool precedes(int e, int k, int j) const {
    if (k == j) return false;
    double dk = smith_ratio(e, k), dj = smith_ratio(e, j);
    return dk < dj || (dk == dj && k < j);
  }

  /// True when every strategy is a singleton, i.e. the instance is a machine
  /// scheduling instance R||.
  bool is_scheduling() const { return scheduling_; }

  int total_strategies() const { return total_strategies_; }

 private:
  std::vector<std::string> resources_;
  std::vector<RawPlayer> players_;
  std::vector<std::vector<double>> smith_;  // [j][e]
  bool scheduling_ = true;
  int total_strategies_ = 0;
};

struct AffineResource {
  std::string id;
  double a = 0.0;
  double b = 0.0;
};

struct RawAffinePlayer {
  std::string id;
  std::vector<std::vector<int>> strategies;
  std::vector<double> resource_weights;  // dense over resources, NaN = undefined
};

/// Weighted affine congestion game: latency a_e * load + b_e per resource,
/// unrelated player weights w_ej.
class AffineInstance {
 public:
  AffineInstance(std::vector<AffineResource> resources, std::vector<RawAffinePlayer> players);

  int resource_count() const { return static_cast<int>(resources_.size()); }
  int player_count() const { return static_cast<int>(players_.size()); }

  const std::string& resource_id(int e) const { return resources_[e].id; }
  double a(int e) const { return resources_[e].a; }
  double b(int e) const { return resources_[e].b; }
  const std::string& player_id(int j) const { return players_[j].id; }
  const std::vector<std::vector<int>>& strategies(int j) const { return players_[j].strategies; }
  const std::vector<int>& strategy(int j, int i) const { return players_[j].strategies[i]; }
  int strategy_count(int j) const { return static_cast<int>(players_[j].strategies.size()); }
  double resource_weight(int e, int j) const { return players_[j].resource_weights[e]; }

  int total_strategies() const { return total_strategies_; }

 private:
  std::vector<AffineResource> resources_;
  std::vector<RawAffinePlayer> players_;
  int total_strategies_ = 0;
};

/// Per-player distribution over own strategies. Pure assignments are point
/// masses; mixed entries are interpreted as independent randomization.
class Assignment {
 public:
  /// Point mass on strategy choice[j] for every player.
  static Assignment pure(const std::vector<int>& choice, const std::vector<int>& strategy_counts);
  /// Probability vectors; validated to sum to one per player (tol 1e-12).
  static Assignment mixed(std::vector<std::vector<double>> x);

  template <typename Instance>
  static Assignment pure_for(const Instance& inst, const std::vector<int>& choice) {
    std::vector<int> counts(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) counts[j] = inst.strategy_count(j);
    return pure(choice, counts);
  }

  bool is_pure() const { return pure_; }
  int player_count() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& probs(int j) const { return x_[j]; }
  double prob(int j, int i) const { return x_[j][i]; }
  /// Chosen strategy index of a pure assignment.
  int choice(int j) const;

 private:
  std::vector<std::vector<double>> x_;
  bool pure_ = false;
};

/// Checks that an assignment matches the instance shape (strategy counts).
template <typename Instance>
void check_assignment(const Instance& inst, const Assignment& x) {
  if (x.player_count() != inst.player_count())
    fail("DimensionMismatch", "assignment has " + std::to_string(x.player_count()) +
                                  " players, instance has " + std::to_string(inst.player_count()));
  for (int j = 0; j < inst.player_count(); ++j)
    if (static_cast<int>(x.probs(j).size()) != inst.strategy_count(j))
      fail("DimensionMismatch", "assignment for player " + inst.player_id(j) +
                                    " does not match its strategy count");
}

/// Resource-usage marginals z_ej = sum over strategies of j containing e of
/// x_ij, as an (resources x players) matrix.
Eigen::MatrixXd usage_marginals(const CongestionInstance& inst, const Assignment& x);
Eigen::MatrixXd usage_marginals(const AffineInstance& inst, const Assignment& x);

/// Convenience constructor for scheduling instances: machine m_i becomes a
/// resource, every job's strategy set is a list of singleton machine choices.
CongestionInstance make_scheduling_instance(
    int machines, const std::vector<std::string>& job_ids, const std::vector<double>& weights,
    const std::vector<std::vector<std::pair<int, double>>>& feasible);  // (machine, p_ij)

}  // namespace poacert

#endif
