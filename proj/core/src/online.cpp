#include "poacert/online.hpp"

#include <algorithm>
#include <numeric>

#include "poacert/cost.hpp"

namespace poacert {

OnlineState::OnlineState(const CongestionInstance& inst)
    : inst_(&inst),
      choice_(inst.player_count(), -1),
      cumulative_(1, 0.0),
      residents_(inst.resource_count()) {}

void OnlineState::Residents::insert(double delta, double w) {
  const auto pos = std::upper_bound(ratio.begin(), ratio.end(), delta) - ratio.begin();
  ratio.insert(ratio.begin() + pos, delta);
  weight.insert(weight.begin() + pos, w);
  prefix_w.assign(ratio.size(), 0.0);
  prefix_wd.assign(ratio.size(), 0.0);
  double w_acc = 0.0, wd_acc = 0.0;
  for (size_t t = 0; t < ratio.size(); ++t) {
    w_acc += weight[t];
    wd_acc += weight[t] * ratio[t];
    prefix_w[t] = w_acc;
    prefix_wd[t] = wd_acc;
  }
}

double OnlineState::Residents::min_mass(double delta) const {
  if (ratio.empty()) return 0.0;
  // residents with ratio <= delta contribute w*ratio, the rest w*delta
  const auto pos = std::upper_bound(ratio.begin(), ratio.end(), delta) - ratio.begin();
  const double below = pos > 0 ? prefix_wd[pos - 1] : 0.0;
  const double above_w = total_weight() - (pos > 0 ? prefix_w[pos - 1] : 0.0);
  return below + delta * above_w;
}

double OnlineState::increase(int j, int i) const {
  const double wj = inst_->weight(j);
  double total = 0.0;
  for (int e : inst_->strategy(j, i)) {
    total += wj * inst_->processing(e, j);
    total += wj * residents_[e].min_mass(inst_->smith_ratio(e, j));
  }
  return total;
}

void OnlineState::assign(int j, int i) {
  if (choice_[j] != -1) fail("InvalidParams", "player already assigned");
  const double delta = increase(j, i);
  choice_[j] = i;
  arrival_order_.push_back(j);
  cumulative_.push_back(cumulative_.back() + delta);
  for (int e : inst_->strategy(j, i))
    residents_[e].insert(inst_->smith_ratio(e, j), inst_->weight(j));
}

double OnlineState::increase_by_recomputation(int j, int i) const {
  // full cost of (prefix + j on i) minus full cost of the prefix, with
  // unarrived players parked on an arbitrary strategy at probability zero
  auto prefix_cost = [&](int extra_j, int extra_i) {
    std::vector<std::vector<double>> probs(inst_->player_count());
    for (int k = 0; k < inst_->player_count(); ++k) {
      probs[k].assign(inst_->strategy_count(k), 0.0);
      if (choice_[k] != -1) probs[k][choice_[k]] = 1.0;
    }
    if (extra_j >= 0) probs[extra_j][extra_i] = 1.0;
    double total = 0.0;
    const Eigen::MatrixXd z = [&] {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(inst_->resource_count(), inst_->player_count());
      for (int k = 0; k < inst_->player_count(); ++k)
        for (int s = 0; s < inst_->strategy_count(k); ++s)
          if (probs[k][s] > 0)
            for (int e : inst_->strategy(k, s)) m(e, k) += probs[k][s];
      return m;
    }();
    for (int e = 0; e < inst_->resource_count(); ++e)
      for (int a = 0; a < inst_->player_count(); ++a) {
        if (z(e, a) == 0.0) continue;
        total += inst_->weight(a) * inst_->processing(e, a);
        for (int b = 0; b < inst_->player_count(); ++b)
          if (b != a && z(e, b) > 0.0 && inst_->precedes(e, b, a))
            total += inst_->weight(a) * inst_->processing(e, b);
      }
    return total;
  };
  return prefix_cost(j, i) - prefix_cost(-1, 0);
}

GreedyRun greedy_online(const CongestionInstance& inst, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != inst.player_count())
    fail("DimensionMismatch", "arrival order must be a permutation of the players");
  std::vector<bool> seen(inst.player_count(), false);
  for (int j : order) {
    if (j < 0 || j >= inst.player_count() || seen[j])
      fail("InvalidParams", "arrival order is not a permutation");
    seen[j] = true;
  }

  OnlineState state(inst);
  GreedyRun run;
  run.order = order;
  run.cumulative.push_back(0.0);
  std::vector<int> choice(inst.player_count(), 0);
  for (int j : order) {
    int best = 0;
    double best_inc = state.increase(j, 0);
    for (int i = 1; i < inst.strategy_count(j); ++i) {
      const double inc = state.increase(j, i);
      if (inc < best_inc) {
        best = i;
        best_inc = inc;
      }
    }
    // every alternative must dominate the realized increase (the greedy
    // inequality used by the dual fitting)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const double bound = state.increase(j, i);
      const double gap = (best_inc - bound) / std::max(1.0, std::abs(bound));
      run.max_step_violation = std::max(run.max_step_violation, gap);
    }
    state.assign(j, best);
    choice[j] = best;
    run.step_increase.push_back(best_inc);
    run.cumulative.push_back(run.cumulative.back() + best_inc);
  }
  run.x = Assignment::pure_for(inst, choice);
  return run;
}

}  // namespace poacert
