#include "poacert/localsearch.hpp"

#include <algorithm>
#include <cmath>

#include "poacert/cost.hpp"
#include "poacert/generators.hpp"

namespace poacert {

namespace {

void require_scheduling_pure(const CongestionInstance& inst, const Assignment& x) {
  if (!inst.is_scheduling())
    fail("CertificateMismatch", "local search requires a scheduling instance");
  check_assignment(inst, x);
  if (!x.is_pure()) fail("MixedAssignmentUnsupported", "local search requires a pure assignment");
}

int machine_of(const CongestionInstance& inst, int j, int i) { return inst.strategy(j, i)[0]; }

/// w_j p_ij + sum_{k != j on machine(i)} w_j w_k min{d_ij, d_ik}, the
/// right-hand side of both local-optimality displays (without gamma).
double jump_rhs(const CongestionInstance& inst, const std::vector<int>& choice, int j, int i) {
  const int e = machine_of(inst, j, i);
  const double dj = inst.smith_ratio(e, j);
  double rhs = inst.weight(j) * inst.processing(e, j);
  for (int k = 0; k < inst.player_count(); ++k) {
    if (k == j || machine_of(inst, k, choice[k]) != e) continue;
    rhs += inst.weight(j) * inst.weight(k) * std::min(dj, inst.smith_ratio(e, k));
  }
  return rhs;
}

/// w_j C_j(x) + D_j(x) of job j at its current machine; equals jump_rhs at
/// the current machine, so the move gain is rhs(new) - this.
double jump_lhs(const CongestionInstance& inst, const std::vector<int>& choice, int j) {
  return jump_rhs(inst, choice, j, choice[j]);
}

}  // namespace

SearchResult jump_opt(const CongestionInstance& inst, const Assignment& init, int max_iters,
                      double tol_rel) {
  require_scheduling_pure(inst, init);
  const int n = inst.player_count();
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = init.choice(j);

  SearchResult out{init, false, 0};
  while (out.moves < max_iters) {
    bool moved = false;
    for (int j = 0; j < n && out.moves < max_iters; ++j) {
      const double lhs = jump_lhs(inst, choice, j);
      for (int i = 0; i < inst.strategy_count(j); ++i) {
        if (i == choice[j]) continue;
        const double rhs = jump_rhs(inst, choice, j, i);
        if (lhs - rhs > tol_rel * std::max({1.0, lhs, rhs})) {
          choice[j] = i;
          ++out.moves;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      out.converged = true;
      break;
    }
  }
  out.x = Assignment::pure_for(inst, choice);
  return out;
}

LocalOptCertificate check_jumpopt(const CongestionInstance& inst, const Assignment& x) {
  require_scheduling_pure(inst, x);
  const int n = inst.player_count();
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = x.choice(j);

  LocalOptCertificate cert;
  cert.kind = LocalOptCertificate::Kind::JumpOpt;
  for (int j = 0; j < n; ++j) {
    const double lhs = jump_lhs(inst, choice, j);
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const double rhs = jump_rhs(inst, choice, j, i);
      cert.max_violation =
          std::max(cert.max_violation, (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
  }
  cert.max_violation = std::max(cert.max_violation, 0.0);
  return cert;
}

double job_potential(const CongestionInstance& inst, const std::vector<int>& choice, int j) {
  const double gamma = gamma_potential_constant();
  const int i = choice[j];
  const int e = machine_of(inst, j, i);
  const double dj = inst.smith_ratio(e, j);
  double f = inst.weight(j) * inst.processing(e, j);
  for (int k = 0; k < inst.player_count(); ++k) {
    if (k == j || machine_of(inst, k, choice[k]) != e) continue;
    f += gamma * inst.weight(j) * inst.weight(k) * std::min(dj, inst.smith_ratio(e, k));
  }
  return f;
}

namespace {

double potential_after_move(const CongestionInstance& inst, const std::vector<int>& choice, int j,
                            int i) {
  const double gamma = gamma_potential_constant();
  const int e = machine_of(inst, j, i);
  const double dj = inst.smith_ratio(e, j);
  double f = inst.weight(j) * inst.processing(e, j);
  for (int k = 0; k < inst.player_count(); ++k) {
    if (k == j || machine_of(inst, k, choice[k]) != e) continue;
    f += gamma * inst.weight(j) * inst.weight(k) * std::min(dj, inst.smith_ratio(e, k));
  }
  return f;
}

}  // namespace

SearchResult improved_local_search(const CongestionInstance& inst, const Assignment& init,
                                   double eps_rel, int max_iters) {
  require_scheduling_pure(inst, init);
  const int n = inst.player_count();
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = init.choice(j);

  SearchResult out{init, false, 0};
  while (out.moves < max_iters) {
    int best_j = -1, best_i = -1;
    double best_decrease = 0.0;
    for (int j = 0; j < n; ++j) {
      const double fj = job_potential(inst, choice, j);
      for (int i = 0; i < inst.strategy_count(j); ++i) {
        if (i == choice[j]) continue;
        const double decrease = fj - potential_after_move(inst, choice, j, i);
        if (decrease > eps_rel * fj && decrease > best_decrease) {
          best_decrease = decrease;
          best_j = j;
          best_i = i;
        }
      }
    }
    if (best_j < 0) {
      out.converged = true;
      break;
    }
    choice[best_j] = best_i;
    ++out.moves;
  }
  out.x = Assignment::pure_for(inst, choice);
  return out;
}

LocalOptCertificate check_gamma_potential(const CongestionInstance& inst, const Assignment& x) {
  require_scheduling_pure(inst, x);
  const double gamma = gamma_potential_constant();
  const int n = inst.player_count();
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = x.choice(j);

  LocalOptCertificate cert;
  cert.kind = LocalOptCertificate::Kind::GammaPotential;
  cert.f_values.resize(n);
  for (int j = 0; j < n; ++j) {
    const double fj = job_potential(inst, choice, j);
    cert.f_values[j] = fj;
    cert.f_sum += fj;
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const double rhs = potential_after_move(inst, choice, j, i);
      cert.max_violation =
          std::max(cert.max_violation, (fj - rhs) / std::max({1.0, std::abs(fj), std::abs(rhs)}));
    }
  }
  cert.max_violation = std::max(cert.max_violation, 0.0);

  const CostBreakdown c = social_cost(inst, x, Mechanism::SmithRule);
  const double expected = 2 * gamma * c.social - (2 * gamma - 1) * c.eta;
  cert.identity_residual = std::abs(cert.f_sum - expected) / std::max(1.0, std::abs(expected));
  return cert;
}

}  // namespace poacert
