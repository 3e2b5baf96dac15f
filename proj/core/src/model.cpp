#include "poacert/model.hpp"

#include <algorithm>
#include <set>

namespace poacert {

namespace {

void check_strategies(const std::string& player, const std::vector<std::vector<int>>& strategies,
                      int resource_count) {
  if (strategies.empty())
    fail("EmptyStrategy", "player " + player + " has no strategies");
  std::set<std::vector<int>> seen;
  for (const auto& s : strategies) {
    if (s.empty()) fail("EmptyStrategy", "player " + player + " has an empty strategy");
    for (int e : s)
      if (e < 0 || e >= resource_count)
        fail("UnknownResource",
             "player " + player + " references resource index " + std::to_string(e));
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail("UnknownResource", "player " + player + " repeats a resource within a strategy");
    if (!seen.insert(sorted).second)
      fail("EmptyStrategy", "player " + player + " lists a duplicate strategy");
  }
}

}  // namespace

CongestionInstance::CongestionInstance(std::vector<std::string> resources,
                                       std::vector<RawPlayer> players)
    : resources_(std::move(resources)), players_(std::move(players)) {
  const int m = resource_count();
  smith_.resize(players_.size());
  for (size_t j = 0; j < players_.size(); ++j) {
    auto& pl = players_[j];
    if (pl.weight < 0 || !std::isfinite(pl.weight))
      fail("NegativeValue", "player " + pl.id + " has weight " + std::to_string(pl.weight));
    check_strategies(pl.id, pl.strategies, m);
    pl.processing.resize(m, std::numeric_limits<double>::quiet_NaN());
    for (auto& s : pl.strategies) {
      std::sort(s.begin(), s.end());
      if (s.size() != 1) scheduling_ = false;
      for (int e : s) {
        double p = pl.processing[e];
        if (std::isnan(p))
          fail("MissingProcessingTime",
               "player " + pl.id + " has no processing time on resource " + resources_[e]);
        if (p < 0 || !std::isfinite(p))
          fail("NegativeValue", "player " + pl.id + " has processing " + std::to_string(p) +
                                    " on resource " + resources_[e]);
      }
    }
    total_strategies_ += static_cast<int>(pl.strategies.size());
    smith_[j].assign(m, 0.0);
    for (int e = 0; e < m; ++e)
      if (std::isfinite(pl.processing[e]) && pl.weight > 0)
        smith_[j][e] = pl.processing[e] / pl.weight;
  }
}

AffineInstance::AffineInstance(std::vector<AffineResource> resources,
                               std::vector<RawAffinePlayer> players)
    : resources_(std::move(resources)), players_(std::move(players)) {
  const int m = resource_count();
  for (const auto& r : resources_)
    if (r.a < 0 || r.b < 0 || !std::isfinite(r.a) || !std::isfinite(r.b))
      fail("NegativeValue", "resource " + r.id + " has negative latency coefficients");
  for (auto& pl : players_) {
    check_strategies(pl.id, pl.strategies, m);
    pl.resource_weights.resize(m, std::numeric_limits<double>::quiet_NaN());
    for (auto& s : pl.strategies) {
      std::sort(s.begin(), s.end());
      for (int e : s) {
        double w = pl.resource_weights[e];
        if (std::isnan(w))
          fail("MissingProcessingTime",
               "player " + pl.id + " has no weight on resource " + resources_[e].id);
        if (w < 0 || !std::isfinite(w))
          fail("NegativeValue", "player " + pl.id + " has weight " + std::to_string(w) +
                                    " on resource " + resources_[e].id);
      }
    }
    total_strategies_ += static_cast<int>(pl.strategies.size());
  }
}

Assignment Assignment::pure(const std::vector<int>& choice,
                            const std::vector<int>& strategy_counts) {
  if (choice.size() != strategy_counts.size())
    fail("DimensionMismatch", "choice vector does not match player count");
  Assignment a;
  a.pure_ = true;
  a.x_.resize(choice.size());
  for (size_t j = 0; j < choice.size(); ++j) {
    if (choice[j] < 0 || choice[j] >= strategy_counts[j])
      fail("StrategyOutOfRange", "player " + std::to_string(j) + " cannot pick strategy " +
                                     std::to_string(choice[j]));
    a.x_[j].assign(strategy_counts[j], 0.0);
    a.x_[j][choice[j]] = 1.0;
  }
  return a;
}

Assignment Assignment::mixed(std::vector<std::vector<double>> x) {
  Assignment a;
  a.x_ = std::move(x);
  a.pure_ = true;
  for (size_t j = 0; j < a.x_.size(); ++j) {
    double sum = 0.0;
    int ones = 0;
    bool binary = true;
    for (double v : a.x_[j]) {
      if (v < 0 || v > 1 + 1e-12)
        fail("NegativeValue", "assignment probability out of [0,1] for player " +
                                  std::to_string(j));
      if (v == 1.0)
        ++ones;
      else if (v != 0.0)
        binary = false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      fail("DimensionMismatch",
           "assignment probabilities of player " + std::to_string(j) + " sum to " +
               std::to_string(sum));
    if (!(binary && ones == 1)) a.pure_ = false;
  }
  return a;
}

int Assignment::choice(int j) const {
  if (!pure_) fail("MixedAssignmentUnsupported", "choice() requires a pure assignment");
  for (size_t i = 0; i < x_[j].size(); ++i)
    if (x_[j][i] == 1.0) return static_cast<int>(i);
  fail("MixedAssignmentUnsupported", "no point mass found");
}

namespace {

template <typename Instance>
Eigen::MatrixXd marginals_impl(const Instance& inst, const Assignment& x) {
  check_assignment(inst, x);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(inst.resource_count(), inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i)
      for (int e : inst.strategy(j, i)) z(e, j) += x.prob(j, i);
  return z;
}

}  // namespace

Eigen::MatrixXd usage_marginals(const CongestionInstance& inst, const Assignment& x) {
  return marginals_impl(inst, x);
}

Eigen::MatrixXd usage_marginals(const AffineInstance& inst, const Assignment& x) {
  return marginals_impl(inst, x);
}

CongestionInstance make_scheduling_instance(
    int machines, const std::vector<std::string>& job_ids, const std::vector<double>& weights,
    const std::vector<std::vector<std::pair<int, double>>>& feasible) {
  std::vector<std::string> resources(machines);
  for (int i = 0; i < machines; ++i) resources[i] = "m" + std::to_string(i);
  std::vector<RawPlayer> players(job_ids.size());
  for (size_t j = 0; j < job_ids.size(); ++j) {
    players[j].id = job_ids[j];
    players[j].weight = weights[j];
    players[j].processing.assign(machines, std::numeric_limits<double>::quiet_NaN());
    for (auto [machine, p] : feasible[j]) {
      players[j].strategies.push_back({machine});
      players[j].processing[machine] = p;
    }
  }
  return CongestionInstance(std::move(resources), std::move(players));
}

}  // namespace poacert
