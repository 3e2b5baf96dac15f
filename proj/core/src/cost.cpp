#include "poacert/cost.hpp"

#include <algorithm>

namespace poacert {

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::SmithRule: return "smith";
    case Mechanism::ProportionalSharing: return "ps";
    case Mechanism::Rand: return "rand";
  }
  return "?";
}

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "smith" || s == "sr") return Mechanism::SmithRule;
  if (s == "ps" || s == "proportional") return Mechanism::ProportionalSharing;
  if (s == "rand") return Mechanism::Rand;
  fail("InvalidParams", "unknown mechanism '" + s + "'");
}

namespace {

/// Cost incurred by player j on resource e given the other players' usage
/// marginals, under the mechanism's closed form. Player j's own usage never
/// enters (the k sums exclude j).
double resource_cost(const CongestionInstance& inst, const Eigen::MatrixXd& z, int e, int j,
                     Mechanism m) {
  const double dj = inst.smith_ratio(e, j);
  double c = inst.processing(e, j);
  for (int k = 0; k < inst.player_count(); ++k) {
    if (k == j) continue;
    const double zek = z(e, k);
    if (zek == 0.0) continue;
    switch (m) {
      case Mechanism::SmithRule:
        if (inst.precedes(e, k, j)) c += inst.processing(e, k) * zek;
        break;
      case Mechanism::ProportionalSharing:
        if (inst.precedes(e, k, j))
          c += inst.processing(e, k) * zek;
        else
          c += inst.weight(k) * zek * dj;
        break;
      case Mechanism::Rand:
        c += rand_after_prob(dj, inst.smith_ratio(e, k)) * inst.processing(e, k) * zek;
        break;
    }
  }
  return c;
}

}  // namespace

CostBreakdown social_cost(const CongestionInstance& inst, const Assignment& x, Mechanism m) {
  const Eigen::MatrixXd z = usage_marginals(inst, x);
  const int n = inst.player_count();
  CostBreakdown out;
  out.per_player.assign(n, 0.0);
  out.weighted.assign(n, 0.0);
  out.delay.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double cj = 0.0;
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const double xij = x.prob(j, i);
      if (xij == 0.0) continue;
      double s = 0.0;
      for (int e : inst.strategy(j, i)) s += resource_cost(inst, z, e, j, m);
      cj += xij * s;
    }
    out.per_player[j] = cj;
    out.weighted[j] = inst.weight(j) * cj;
    out.social += out.weighted[j];
  }
  // eta(x) and D_j(x); together with the social cost they satisfy
  // C = eta + sum_j D_j under Smith's Rule.
  for (int e = 0; e < inst.resource_count(); ++e)
    for (int j = 0; j < n; ++j) {
      const double zej = z(e, j);
      if (zej == 0.0) continue;
      out.eta += inst.weight(j) * inst.processing(e, j) * zej;
      double dj = 0.0;
      for (int k = 0; k < n; ++k)
        if (k != j && z(e, k) > 0.0 && inst.precedes(e, j, k)) dj += inst.weight(k) * z(e, k);
      out.delay[j] += dj * inst.processing(e, j) * zej;
    }
  return out;
}

double deviation_cost(const CongestionInstance& inst, const Assignment& x, int j, int i,
                      Mechanism m, bool literal) {
  check_assignment(inst, x);
  if (i < 0 || i >= inst.strategy_count(j))
    fail("StrategyOutOfRange", "player " + inst.player_id(j) + " has no strategy " +
                                   std::to_string(i));
  const Eigen::MatrixXd z = usage_marginals(inst, x);
  double total = 0.0;
  for (int e : inst.strategy(j, i)) {
    if (literal && m == Mechanism::ProportionalSharing) {
      // min-form display: sum over all k including j's own usage from x.
      const double dj = inst.smith_ratio(e, j);
      double c = inst.processing(e, j);
      for (int k = 0; k < inst.player_count(); ++k) {
        const double zek = z(e, k);
        if (zek == 0.0) continue;
        c += inst.weight(k) * zek * std::min(dj, inst.smith_ratio(e, k));
      }
      total += c;
    } else {
      total += resource_cost(inst, z, e, j, m);
    }
  }
  return total;
}

std::vector<double> affine_loads(const AffineInstance& inst, const Assignment& x) {
  if (!x.is_pure()) fail("MixedAssignmentUnsupported", "affine costs require a pure assignment");
  const Eigen::MatrixXd z = usage_marginals(inst, x);
  std::vector<double> load(inst.resource_count(), 0.0);
  for (int e = 0; e < inst.resource_count(); ++e)
    for (int j = 0; j < inst.player_count(); ++j)
      if (z(e, j) > 0.0) load[e] += inst.resource_weight(e, j) * z(e, j);
  return load;
}

CostBreakdown affine_cost(const AffineInstance& inst, const Assignment& x) {
  const std::vector<double> load = affine_loads(inst, x);
  const int n = inst.player_count();
  CostBreakdown out;
  out.per_player.assign(n, 0.0);
  out.weighted.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int i = x.choice(j);
    double cj = 0.0;
    for (int e : inst.strategy(j, i))
      cj += inst.resource_weight(e, j) * (inst.a(e) * load[e] + inst.b(e));
    out.per_player[j] = cj;
    out.weighted[j] = cj;  // affine games carry the weight inside w_ej
  }
  for (int e = 0; e < inst.resource_count(); ++e)
    out.social += inst.a(e) * load[e] * load[e] + inst.b(e) * load[e];
  return out;
}

double affine_deviation_cost(const AffineInstance& inst, const Assignment& x, int j, int i) {
  if (i < 0 || i >= inst.strategy_count(j))
    fail("StrategyOutOfRange", "player " + inst.player_id(j) + " has no strategy " +
                                   std::to_string(i));
  std::vector<double> load = affine_loads(inst, x);
  // remove j, then add it on its new strategy
  const int cur = x.choice(j);
  for (int e : inst.strategy(j, cur)) load[e] -= inst.resource_weight(e, j);
  double cj = 0.0;
  for (int e : inst.strategy(j, i))
    cj += inst.resource_weight(e, j) * (inst.a(e) * (load[e] + inst.resource_weight(e, j)) +
                                        inst.b(e));
  return cj;
}

}  // namespace poacert
