#ifndef POACERT_ONLINE_HPP
#define POACERT_ONLINE_HPP

#include <vector>

#include "poacert/model.hpp"

namespace poacert {

/// State of an online run: the prefix of arrived players, their irrevocable
/// choices, and the running objective C^(t) after each arrival. Per resource
/// the residents are kept sorted by Smith ratio with prefix aggregates so the
/// marginal-increase formula evaluates in O(log) per resource.
class OnlineState {
 public:
  explicit OnlineState(const CongestionInstance& inst);

  const CongestionInstance& instance() const { return *inst_; }
  int arrived() const { return static_cast<int>(arrival_order_.size()); }
  const std::vector<int>& arrival_order() const { return arrival_order_; }
  int choice(int j) const { return choice_[j]; }
  /// C^(t): total cost after the t-th arrival; C^(0) = 0.
  double cumulative_cost(int t) const { return cumulative_[t]; }
  const std::vector<double>& cumulative_costs() const { return cumulative_; }

  /// Exact objective increase if player j (not yet arrived) picked strategy i:
  /// sum over e in i of w_j p_ej + sum_{arrived k} w_j w_k min{delta_ej, delta_ek} z_ek.
  double increase(int j, int i) const;

  /// Commits player j to strategy i.
  void assign(int j, int i);

  /// Recomputes the increase by evaluating the social cost from scratch
  /// (debug cross-check for the incremental structure).
  double increase_by_recomputation(int j, int i) const;

 private:
  struct Residents {
    std::vector<double> ratio;      // sorted ascending
    std::vector<double> weight;     // aligned with ratio
    std::vector<double> prefix_w;   // prefix sums of weight
    std::vector<double> prefix_wd;  // prefix sums of weight * ratio

    void insert(double delta, double w);
    /// sum_k w_k min{delta, ratio_k} over residents.
    double min_mass(double delta) const;
    double total_weight() const { return prefix_w.empty() ? 0.0 : prefix_w.back(); }
  };

  const CongestionInstance* inst_;
  std::vector<int> arrival_order_;
  std::vector<int> choice_;
  std::vector<double> cumulative_;
  std::vector<Residents> residents_;  // per resource
};

struct GreedyRun {
  Assignment x;
  std::vector<int> order;               // arrival order (player indices)
  std::vector<double> step_increase;    // realized C^(t) - C^(t-1) per step
  std::vector<double> cumulative;       // C^(0..n)
  /// Worst relative gap between the realized increase and the Lemma-style
  /// bound for any alternative strategy at any step (<= 0 means all hold).
  double max_step_violation = 0.0;
};

/// Assigns players in the given arrival order, each to the strategy with the
/// minimal objective increase (ties: lowest strategy index).
GreedyRun greedy_online(const CongestionInstance& inst, const std::vector<int>& order);

}  // namespace poacert

#endif
