#include "poacert/suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "poacert/cost.hpp"
#include "poacert/dualfit.hpp"
#include "poacert/equilibria.hpp"
#include "poacert/generators.hpp"
#include "poacert/localsearch.hpp"
#include "poacert/online.hpp"
#include "poacert/oracle.hpp"
#include "poacert/sdp.hpp"

namespace poacert {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

struct Failure {
  bool failed = false;
  std::string why;

  void check(bool ok, const std::string& message) {
    if (!ok && !failed) {
      failed = true;
      why = message;
    }
  }
};

// ---------------------------------------------------------------------------
// criterion 1: constant identities and rho values

CriterionResult criterion_constants() {
  CriterionResult r{1, "constant identities", true, ""};
  double worst = 0.0;
  for (Scenario s : {Scenario::PropSharing, Scenario::Rand2133, Scenario::RandUniform2,
                     Scenario::ImprovedLSFit, Scenario::SmithRule4}) {
    const ScenarioConstants c = scenario_constants(s);
    for (double v : c.residuals) worst = std::max(worst, v);
  }
  const double targets[][2] = {
      {scenario_constants(Scenario::PropSharing).rho, 2.0 / (3.0 + kSqrt5)},
      {scenario_constants(Scenario::Rand2133).rho, 15.0 / 32.0},
      {scenario_constants(Scenario::RandUniform2).rho, 0.5},
      {scenario_constants(Scenario::ImprovedLSFit).rho, 4.0 / (5.0 + kSqrt5)},
  };
  for (const auto& t : targets) worst = std::max(worst, std::abs(t[0] - t[1]) / t[1]);
  r.pass = worst <= 1e-12;
  r.detail = "max residual " + fmt(worst);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 2: primal consistency <C,(1,x)(1,x)^T> == social cost

CriterionResult criterion_primal(std::uint64_t seed) {
  CriterionResult r{2, "primal consistency", true, ""};
  Failure f;
  SplitMix64 rng(seed * 7919 + 2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000 && !f.failed; ++trial) {
    RandomProfile prof;
    prof.players = 1 + rng.below(5);
    prof.resources = 1 + rng.below(4);
    prof.max_strategies = 3;
    prof.max_strategy_size = std::min(3, prof.resources);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    const CostMatrix smith = build_cost_matrix(inst, GameKind::SmithRule);
    const CostMatrix rand = build_cost_matrix(inst, GameKind::Rand);

    RandomAffineProfile aprof;
    aprof.players = prof.players;
    aprof.resources = prof.resources;
    const AffineInstance aff = gen_random_affine(rng.next(), aprof);
    const CostMatrix affm = build_cost_matrix(aff);

    for (int t = 0; t < 8; ++t) {
      std::vector<int> choice(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
      const Assignment x = Assignment::pure_for(inst, choice);
      const double e1 = rel_err(primal_value(smith, x),
                                social_cost(inst, x, Mechanism::SmithRule).social);
      const double e2 = rel_err(primal_value(rand, x), social_cost(inst, x, Mechanism::Rand).social);
      worst = std::max({worst, e1, e2});

      std::vector<int> achoice(aff.player_count());
      for (int j = 0; j < aff.player_count(); ++j) achoice[j] = rng.below(aff.strategy_count(j));
      const Assignment ax = Assignment::pure_for(aff, achoice);
      worst = std::max(worst, rel_err(primal_value(affm, ax), affine_cost(aff, ax).social));
    }
    f.check(worst <= 1e-9, "relative gap " + fmt(worst) + " at trial " + std::to_string(trial));
  }
  r.pass = !f.failed;
  r.detail = f.failed ? f.why : "1000 instances x 3 kinds, max gap " + fmt(worst);
  return r;
}

// ---------------------------------------------------------------------------
// criteria 3 + 4 + 10 share the seeded equilibrium batches

struct VerifiedFit {
  Scenario scenario;
  double dual_objective;
  double certificate_cost;
};

struct EquilibriumBatch {
  // per instance: the instance, its pure equilibria per relevant mechanism,
  // verified dual objectives, and brute-force optima per benchmark mechanism
  int verifications = 0;
  double worst_set1 = 0.0, worst_set2 = 0.0, worst_gram = 0.0, worst_margin = 1e300;
  Failure f;
  // weak-duality material
  std::vector<std::string> notes;
};

Scenario scenario_for(Mechanism m) {
  switch (m) {
    case Mechanism::SmithRule: return Scenario::SmithRule4;
    case Mechanism::ProportionalSharing: return Scenario::PropSharing;
    case Mechanism::Rand: return Scenario::Rand2133;
  }
  return Scenario::SmithRule4;
}

double scenario_ratio_bound(Scenario s) {
  switch (s) {
    case Scenario::SmithRule4: return 4.0;
    case Scenario::PropSharing: return (3.0 + kSqrt5) / 2.0;
    case Scenario::Rand2133: return 32.0 / 15.0;
    case Scenario::RandUniform2: return 2.0;
    case Scenario::RandPoA2: return 2.0;
    case Scenario::AffineCG: return (3.0 + kSqrt5) / 2.0;
    default: return 0.0;
  }
}

struct BatchOutcome {
  CriterionResult feasibility{3, "fitting feasibility and bound", true, ""};
  CriterionResult weak_duality{4, "weak duality and ratio bounds", true, ""};
  CriterionResult cce{10, "coarse-correlated extension", true, ""};
};

void run_scenario_on_ne(const CongestionInstance& inst, Scenario s, const Assignment& ne,
                        double smith_opt, double mech_opt, EquilibriumBatch* batch,
                        Failure* weak) {
  const ScenarioConstants c = scenario_constants(s);
  const DualSolution sol = fit_dual(s, inst, Certificate(ne));
  const FeasibilityReport rep = verify_dual(s, inst, Certificate(ne), sol);
  ++batch->verifications;
  batch->worst_set1 = std::max(batch->worst_set1, rep.max_violation_set1);
  batch->worst_set2 = std::max(batch->worst_set2, rep.max_violation_set2);
  batch->worst_gram =
      std::max(batch->worst_gram, -rep.gram_min_eig / std::max(rep.gram_trace, 1e-300));
  batch->worst_margin = std::min(
      batch->worst_margin, rep.dual_objective - c.rho * rep.social_cost +
                               1e-8 * std::max(1.0, rep.social_cost));
  batch->f.check(rep.pass, to_string(s) + " fitting failed verification");

  // weak duality: the dual objective lower-bounds the benchmark optimum
  const double opt = s == Scenario::RandPoA2 ? mech_opt : smith_opt;
  weak->check(rep.dual_objective <= opt * (1.0 + 1e-9) + 1e-12,
              to_string(s) + " dual objective " + fmt(rep.dual_objective) + " exceeds OPT " +
                  fmt(opt));
  // the paper's ratio bound follows; check it empirically as well
  const double bound = scenario_ratio_bound(s);
  weak->check(rep.social_cost <= bound * opt * (1.0 + 1e-6) + 1e-12,
              to_string(s) + " equilibrium cost " + fmt(rep.social_cost) + " above " +
                  fmt(bound) + " x OPT " + fmt(opt));
}

void mutation_tests(const CongestionInstance& inst, Scenario s, const Assignment& ne,
                    Failure* f) {
  // (a) bump the y entry with the least first-family slack beyond its slack
  DualSolution sol = fit_dual(s, inst, Certificate(ne));
  double min_slack = 1e300;
  int worst_j = 0;
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      double diag = 0.0;
      for (int e : inst.strategy(j, i)) diag += inst.weight(j) * inst.processing(e, j);
      const KernelVector& vij = sol.vec(j, i);
      const double rhs = diag - 0.5 * norm_squared(vij) + inner_product(sol.v0, vij);
      if (rhs - sol.y[j] < min_slack) {
        min_slack = rhs - sol.y[j];
        worst_j = j;
      }
    }
  sol.y[worst_j] += 2.0 * std::max(min_slack, 0.0) + 1.0;
  const FeasibilityReport broken = verify_dual(s, inst, Certificate(ne), sol);
  f->check(!broken.pass && broken.max_violation_set1 > 1e-8,
           "corrupted y escaped the verifier for " + to_string(s));

  // (b) inflating every vector breaks the tight second constraints
  DualSolution scaled = fit_dual(s, inst, Certificate(ne));
  bool has_pair = false;
  for (int j = 0; j < inst.player_count() && !has_pair; ++j)
    for (int k = j + 1; k < inst.player_count() && !has_pair; ++k)
      for (int i = 0; i < inst.strategy_count(j) && !has_pair; ++i)
        for (int i2 = 0; i2 < inst.strategy_count(k) && !has_pair; ++i2)
          if (inner_product(scaled.vec(j, i), scaled.vec(k, i2)) > 1e-9) has_pair = true;
  if (has_pair && s == Scenario::SmithRule4) {
    for (auto& v : scaled.v)
      for (auto& st : v.f) st.height *= 1.1;
    const FeasibilityReport b2 = verify_dual(s, inst, Certificate(ne), scaled);
    f->check(!b2.pass && b2.max_violation_set2 > 1e-8,
             "inflated vectors escaped the verifier");
  }
}

BatchOutcome criterion_equilibrium_batches(std::uint64_t seed) {
  BatchOutcome out;
  EquilibriumBatch batch;
  Failure weak;
  Failure cce_fail;
  int cce_points = 0, cce_mixtures = 0;
  bool mutated = false;
  SplitMix64 rng(seed * 7919 + 3);

  for (int t = 0; t < 200; ++t) {
    const int flavor = t % 10;  // 0..4 congestion, 5..7 uniform-ratio, 8..9 affine
    if (flavor >= 8) {
      RandomAffineProfile prof;
      prof.players = 2 + rng.below(3);
      prof.resources = 2 + rng.below(2);
      prof.max_strategies = 3;
      prof.max_strategy_size = 2;
      const AffineInstance inst = gen_random_affine(rng.next(), prof);
      const auto nes = enumerate_pure_equilibria(inst, 1e-9);
      if (nes.empty()) continue;
      const double opt = brute_force_opt(inst).value;
      for (const auto& choice : nes) {
        const Assignment ne = Assignment::pure_for(inst, choice);
        const DualSolution sol = fit_dual(inst, ne);
        const FeasibilityReport rep = verify_dual(inst, ne, sol);
        ++batch.verifications;
        batch.worst_set1 = std::max(batch.worst_set1, rep.max_violation_set1);
        batch.worst_set2 = std::max(batch.worst_set2, rep.max_violation_set2);
        batch.f.check(rep.pass, "affine fitting failed verification");
        weak.check(rep.dual_objective <= opt * (1.0 + 1e-9) + 1e-12,
                   "affine dual objective exceeds OPT");
        weak.check(rep.social_cost <= scenario_ratio_bound(Scenario::AffineCG) * opt *
                                              (1.0 + 1e-6) + 1e-12,
                   "affine PoA bound violated");
      }
      continue;
    }

    RandomProfile prof;
    prof.players = 2 + rng.below(3);
    prof.resources = 2 + rng.below(2);
    prof.max_strategies = 3;
    prof.max_strategy_size = 2;
    if (flavor >= 5) prof.kind = RandomProfile::Kind::UniformRatio;
    const CongestionInstance inst = gen_random(rng.next(), prof);

    const double smith_opt = brute_force_opt(inst, Mechanism::SmithRule).value;
    const double rand_opt = brute_force_opt(inst, Mechanism::Rand).value;

    for (Mechanism m :
         {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
      const auto nes = enumerate_pure_equilibria(inst, m, 1e-9);
      for (const auto& choice : nes) {
        const Assignment ne = Assignment::pure_for(inst, choice);
        run_scenario_on_ne(inst, scenario_for(m), ne, smith_opt, rand_opt, &batch, &weak);
        if (m == Mechanism::Rand) {
          run_scenario_on_ne(inst, Scenario::RandPoA2, ne, smith_opt, rand_opt, &batch, &weak);
          if (prof.kind == RandomProfile::Kind::UniformRatio)
            run_scenario_on_ne(inst, Scenario::RandUniform2, ne, smith_opt, rand_opt, &batch,
                               &weak);
        }
        if (!mutated && m == Mechanism::SmithRule && inst.player_count() >= 2) {
          mutation_tests(inst, Scenario::SmithRule4, ne, &batch.f);
          mutated = true;
        }
      }

      // criterion 10 material: point masses and two-profile mixtures
      const Scenario s = scenario_for(m);
      if (!nes.empty() && cce_points < 12) {
        const Assignment ne = Assignment::pure_for(inst, nes.front());
        ProfileDistribution point;
        point.support.push_back({ne, 1.0});
        const FeasibilityReport a = verify_dual_cce(s, inst, point);
        const DualSolution sol = fit_dual(s, inst, Certificate(ne));
        const FeasibilityReport b = verify_dual(s, inst, Certificate(ne), sol);
        cce_fail.check(a.pass, "point-mass CCE verification failed for " + to_string(s));
        cce_fail.check(rel_err(a.dual_objective, b.dual_objective) <= 1e-9,
                       "point-mass CCE objective differs from the pure verification");
        ++cce_points;
      }
      if (nes.size() >= 2 && cce_mixtures < 12) {
        ProfileDistribution mix;
        mix.support.push_back({Assignment::pure_for(inst, nes.front()), 0.5});
        mix.support.push_back({Assignment::pure_for(inst, nes.back()), 0.5});
        const FeasibilityReport rep = verify_dual_cce(s, inst, mix);
        cce_fail.check(rep.pass, "mixture CCE verification failed for " + to_string(s));
        ++cce_mixtures;
      }
    }
  }

  batch.f.check(mutated, "no mutation test ran");
  out.feasibility.pass = !batch.f.failed;
  out.feasibility.detail =
      batch.f.failed ? batch.f.why
                     : std::to_string(batch.verifications) + " fittings, worst set1 " +
                           fmt(batch.worst_set1) + ", set2 " + fmt(batch.worst_set2) +
                           ", gram " + fmt(batch.worst_gram);
  out.weak_duality.pass = !weak.failed;
  out.weak_duality.detail = weak.failed ? weak.why : "all dual objectives below oracle optima";
  cce_fail.check(cce_points >= 3, "too few CCE point masses exercised");
  cce_fail.check(cce_mixtures >= 1, "no CCE mixture exercised");
  out.cce.pass = !cce_fail.failed;
  out.cce.detail = cce_fail.failed ? cce_fail.why
                                   : std::to_string(cce_points) + " point masses, " +
                                         std::to_string(cce_mixtures) + " mixtures";
  return out;
}

// ---------------------------------------------------------------------------
// criterion 5: local search certificates and ratios

CriterionResult criterion_local_search(std::uint64_t seed) {
  CriterionResult r{5, "local search certificates", true, ""};
  Failure f;
  SplitMix64 rng(seed * 7919 + 5);
  const ScenarioConstants jump_c = scenario_constants(Scenario::JumpOptFit);
  const ScenarioConstants ls_c = scenario_constants(Scenario::ImprovedLSFit);
  const double restricted_bound = (5.0 + kSqrt5) / 4.0;
  int ls_converged = 0;

  for (int t = 0; t < 60 && !f.failed; ++t) {
    RandomProfile prof;
    prof.kind = RandomProfile::Kind::Scheduling;
    prof.players = 3 + rng.below(5);
    prof.resources = 2 + rng.below(3);
    prof.max_strategies = prof.resources;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    const GreedyRun init = greedy_online(inst, [&] {
      std::vector<int> order(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j) order[j] = j;
      return order;
    }());

    // JumpOpt: fixed point, Lemma-style inequalities, dual bound on 2C - eta
    const SearchResult jo = jump_opt(inst, init.x, 5000);
    f.check(jo.converged, "jump_opt hit the move cap");
    const LocalOptCertificate cert = check_jumpopt(inst, jo.x);
    f.check(cert.max_violation <= 1e-9, "JumpOpt certificate violation " +
                                            fmt(cert.max_violation));
    const DualSolution sol = fit_dual(Scenario::JumpOptFit, inst, Certificate(jo.x));
    const FeasibilityReport rep = verify_dual(Scenario::JumpOptFit, inst, Certificate(jo.x), sol);
    f.check(rep.pass, "JumpOpt fitting failed verification");
    f.check(rel_err(rep.dual_objective, rep.strong_bound) <= 1e-9,
            "JumpOpt dual objective misses rho*(2C - eta)");
    f.check(rep.dual_objective >= jump_c.rho * rep.social_cost -
                                      1e-8 * std::max(1.0, rep.social_cost),
            "JumpOpt bound below rho*C");

    // improved local search on the same instance
    const SearchResult ls = improved_local_search(inst, init.x, 1e-9, 20000);
    if (ls.converged) {
      ++ls_converged;
      const LocalOptCertificate pc = check_gamma_potential(inst, ls.x);
      f.check(pc.max_violation <= 1e-8, "potential certificate violation " +
                                            fmt(pc.max_violation));
      f.check(pc.identity_residual <= 1e-9, "potential identity residual " +
                                                fmt(pc.identity_residual));
      const DualSolution ls_sol = fit_dual(Scenario::ImprovedLSFit, inst, Certificate(ls.x));
      const FeasibilityReport ls_rep =
          verify_dual(Scenario::ImprovedLSFit, inst, Certificate(ls.x), ls_sol);
      f.check(ls_rep.pass, "improved-search fitting failed verification");
      f.check(rel_err(ls_rep.dual_objective, ls_c.rho * ls_rep.social_cost) <= 1e-8,
              "improved-search objective misses rho*C");
      const double opt = brute_force_opt(inst, Mechanism::SmithRule).value;
      if (opt > 0)
        f.check(ls_rep.social_cost / opt <= restricted_bound + 1e-6,
                "improved-search ratio " + fmt(ls_rep.social_cost / opt) + " above the bound");
    }
  }
  f.check(ls_converged >= 48, "improved local search converged only " +
                                  std::to_string(ls_converged) + "/60 times");

  // restricted identical machines: eta is assignment-independent, so the
  // stronger (5+sqrt5)/4 guarantee applies
  for (int t = 0; t < 40 && !f.failed; ++t) {
    RandomProfile prof;
    prof.kind = RandomProfile::Kind::RestrictedIdentical;
    prof.players = 3 + rng.below(4);
    prof.resources = 2 + rng.below(3);
    prof.max_strategies = prof.resources;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> order(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) order[j] = j;
    const SearchResult jo = jump_opt(inst, greedy_online(inst, order).x, 5000);
    f.check(jo.converged, "restricted jump_opt hit the move cap");
    const DualSolution sol = fit_dual(Scenario::JumpOptRestricted, inst, Certificate(jo.x));
    const FeasibilityReport rep =
        verify_dual(Scenario::JumpOptRestricted, inst, Certificate(jo.x), sol);
    f.check(rep.pass, "restricted fitting failed verification");
    const double opt = brute_force_opt(inst, Mechanism::SmithRule).value;
    // eta(x) equals eta(x*) here; check it rather than assume it
    const double eta_x = social_cost(inst, jo.x, Mechanism::SmithRule).eta;
    const Assignment xstar =
        Assignment::pure_for(inst, brute_force_opt(inst, Mechanism::SmithRule).argmin);
    const double eta_star = social_cost(inst, xstar, Mechanism::SmithRule).eta;
    f.check(rel_err(eta_x, eta_star) <= 1e-9, "eta differs between x and x*");
    if (opt > 0)
      f.check(rep.social_cost / opt <= restricted_bound + 1e-6,
              "restricted ratio " + fmt(rep.social_cost / opt) + " above (5+sqrt5)/4");
  }

  r.pass = !f.failed;
  r.detail = f.failed ? f.why
                      : "60 JumpOpt + 40 restricted + " + std::to_string(ls_converged) +
                            " improved-search fixed points certified";
  return r;
}

// ---------------------------------------------------------------------------
// criterion 6: the lower-bound family

CriterionResult criterion_lower_bound() {
  CriterionResult r{6, "lower-bound instance", true, ""};
  Failure f;
  for (int n = 2; n <= 12; ++n) {
    const LowerBoundLS lb = gen_lower_bound_ls(n);
    const LocalOptCertificate cert = check_gamma_potential(lb.instance, lb.shifted);
    f.check(cert.max_violation <= 1e-9,
            "n=" + std::to_string(n) + " certificate violation " + fmt(cert.max_violation));
    const BruteForceResult opt = brute_force_opt(lb.instance, Mechanism::SmithRule);
    f.check(rel_err(opt.value, lb.canonical_cost) <= 1e-9,
            "n=" + std::to_string(n) + " oracle OPT " + fmt(opt.value) +
                " differs from the diagonal cost");
  }

  const LowerBoundLS big = gen_lower_bound_ls(500);
  const LocalOptCertificate cert = check_gamma_potential(big.instance, big.shifted);
  f.check(cert.max_violation <= 1e-9, "n=500 certificate violation " + fmt(cert.max_violation));
  f.check(cert.identity_residual <= 1e-9, "n=500 identity residual");
  const double shifted = social_cost(big.instance, big.shifted, Mechanism::SmithRule).social;
  f.check(rel_err(shifted, big.shifted_cost) <= 1e-9, "n=500 shifted cost mismatch");
  const double ratio = shifted / big.canonical_cost;
  f.check(ratio >= 1.788, "n=500 ratio " + fmt(ratio) + " below 1.788");

  // the shifted profile also feeds the improved-search dual fitting
  const LowerBoundLS mid = gen_lower_bound_ls(120);
  const DualSolution sol = fit_dual(Scenario::ImprovedLSFit, mid.instance, Certificate(mid.shifted));
  const FeasibilityReport rep =
      verify_dual(Scenario::ImprovedLSFit, mid.instance, Certificate(mid.shifted), sol);
  f.check(rep.pass, "n=120 potential fitting failed verification");

  r.pass = !f.failed;
  r.detail = f.failed ? f.why : "certified for n in 2..12 and n=500; n=500 ratio " + fmt(
      social_cost(big.instance, big.shifted, Mechanism::SmithRule).social / big.canonical_cost);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 7: greedy online over all arrival orders

CriterionResult criterion_greedy(std::uint64_t seed) {
  CriterionResult r{7, "greedy online", true, ""};
  Failure f;
  SplitMix64 rng(seed * 7919 + 7);
  int runs = 0;
  for (int t = 0; t < 30 && !f.failed; ++t) {
    RandomProfile prof;
    prof.players = 2 + rng.below(5);
    prof.resources = 2 + rng.below(2);
    prof.max_strategies = 3;
    prof.max_strategy_size = 2;
    if (t % 2 == 0) prof.kind = RandomProfile::Kind::Scheduling;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    const double opt = brute_force_opt(inst, Mechanism::SmithRule).value;

    std::vector<int> order(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) order[j] = j;
    do {
      const GreedyRun run = greedy_online(inst, order);
      ++runs;
      f.check(run.max_step_violation <= 1e-9,
              "greedy step bound violated by " + fmt(run.max_step_violation));
      const double total = social_cost(inst, run.x, Mechanism::SmithRule).social;
      f.check(rel_err(run.cumulative.back(), total) <= 1e-9, "telescoping sum mismatch");
      f.check(total <= 4.0 * opt * (1.0 + 1e-9) + 1e-12,
              "greedy cost " + fmt(total) + " above 4 x OPT " + fmt(opt));

      const DualSolution sol = fit_dual(Scenario::GreedyFit, inst, Certificate(run));
      const FeasibilityReport rep = verify_dual(Scenario::GreedyFit, inst, Certificate(run), sol);
      f.check(rep.pass, "greedy fitting failed verification");
      f.check(rep.ratio >= 0.25 - 1e-8 || rep.social_cost == 0.0,
              "greedy dual ratio " + fmt(rep.ratio) + " below 1/4");
      f.check(rel_err(rep.y_sum, 0.5 * total) <= 1e-9, "sum(y) differs from C/2");
      if (f.failed) break;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  r.pass = !f.failed;
  r.detail = f.failed ? f.why : std::to_string(runs) + " greedy runs over all arrival orders";
  return r;
}

// ---------------------------------------------------------------------------
// criterion 8: reduced two-size instances

CriterionResult criterion_kk() {
  CriterionResult r{8, "reduced two-size instances", true, ""};
  Failure f;
  double worst_ratio = 0.0;
  int points = 0;
  for (int m = 2; m <= 6 && !f.failed; ++m)
    for (int k = 1; k < m && !f.failed; ++k)
      for (double p : {0.5, 1.0, 2.0, 4.0}) {
        KKParams params{m, k, p, 0.01};
        const KKInstance kk = gen_kk(params);
        ++points;

        const EquilibriumReport eq = check_equilibrium(kk.instance, kk.nash,
                                                       Mechanism::SmithRule, 1e-9);
        f.check(eq.is_equilibrium, "m=" + std::to_string(m) + " k=" + std::to_string(k) +
                                       " p=" + fmt(p) + ": profile is not an equilibrium");

        const Scenario s = kk.high_p ? Scenario::KKHighP : Scenario::KKLowP;
        const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
        const DualSolution sol = fit_dual(s, kk.instance, Certificate(cert));
        const FeasibilityReport rep = verify_dual(s, kk.instance, Certificate(cert), sol);
        f.check(rep.pass, "kk fitting failed verification at m=" + std::to_string(m) +
                              " k=" + std::to_string(k) + " p=" + fmt(p));
        f.check(rel_err(rep.dual_objective, kk.opt_cost) <= 1e-9,
                "dual objective " + fmt(rep.dual_objective) + " differs from the closed form " +
                    fmt(kk.opt_cost));
        const double ratio = rep.social_cost / rep.dual_objective;
        worst_ratio = std::max(worst_ratio, ratio);
        f.check(ratio <= kk_poa_bound() + 1e-3,
                "NE/dual ratio " + fmt(ratio) + " above (1+sqrt2)/2");
        if (f.failed) break;
      }
  r.pass = !f.failed;
  r.detail = f.failed ? f.why
                      : std::to_string(points) + " grid points, worst NE/dual ratio " +
                            fmt(worst_ratio) + " vs bound " + fmt(kk_poa_bound());
  return r;
}

// ---------------------------------------------------------------------------
// criterion 9: embedding fidelity

CriterionResult criterion_embedding(std::uint64_t seed) {
  CriterionResult r{9, "embedding fidelity", true, ""};
  Failure f;
  SplitMix64 rng(seed * 7919 + 9);
  double worst = 0.0, worst_kernel = 0.0;
  for (int t = 0; t < 500 && !f.failed; ++t) {
    // random F family
    std::vector<KernelVector> ff;
    const int nf = 2 + rng.below(7);
    double scale = 0.0;
    for (int v = 0; v < nf; ++v) {
      std::vector<FStep> steps;
      const int count = 1 + rng.below(5);
      for (int s = 0; s < count; ++s) {
        const FStep step{rng.below(4), rng.uniform(-2.0, 2.0), rng.uniform(0.05, 5.0)};
        steps.push_back(step);
      }
      ff.push_back(KernelVector::step_vector(std::move(steps)));
    }
    for (const auto& v : ff) scale = std::max(scale, std::abs(norm_squared(v)));
    const double ef = embedding_max_error(ff, embed_euclidean(ff));
    worst = std::max(worst, ef / (1.0 + scale));
    f.check(ef <= 1e-10 * (1.0 + scale), "F embedding error " + fmt(ef));

    // random G family
    std::vector<KernelVector> gf;
    const int ng = 2 + rng.below(7);
    std::vector<double> ratios;
    for (int v = 0; v < ng; ++v) {
      std::vector<GAtom> atoms;
      const int count = 1 + rng.below(5);
      for (int s = 0; s < count; ++s) {
        const GAtom atom{rng.below(4), rng.uniform(-2.0, 2.0), rng.uniform(0.05, 8.0)};
        ratios.push_back(atom.ratio);
        atoms.push_back(atom);
      }
      gf.push_back(KernelVector::kernel_vector(std::move(atoms)));
    }
    scale = 0.0;
    for (const auto& v : gf) scale = std::max(scale, std::abs(norm_squared(v)));
    const double eg = embedding_max_error(gf, embed_euclidean(gf));
    worst = std::max(worst, eg / (1.0 + scale));
    f.check(eg <= 1e-10 * (1.0 + scale), "G embedding error " + fmt(eg));

    // the restricted kernel stays PSD
    const Eigen::MatrixXd kernel = g_kernel_matrix(ratios);
    const double min_eig = gram_min_eigenvalue(kernel);
    worst_kernel = std::max(worst_kernel, -min_eig / std::max(kernel.trace(), 1e-300));
    f.check(min_eig >= -1e-10 * kernel.trace(), "kernel min eigenvalue " + fmt(min_eig));
  }
  r.pass = !f.failed;
  r.detail = f.failed ? f.why
                      : "500 F + 500 G families, worst scaled error " + fmt(worst) +
                            ", kernel dip " + fmt(worst_kernel);
  return r;
}

}  // namespace

SuiteResult run_acceptance(std::uint64_t seed, std::ostream* log) {
  SuiteResult out;
  const auto push = [&](CriterionResult r) {
    if (log)
      *log << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name
           << " — " << r.detail << "\n";
    out.all_pass = out.all_pass && r.pass;
    out.criteria.push_back(std::move(r));
  };

  push(criterion_constants());
  push(criterion_primal(seed));
  BatchOutcome batches = criterion_equilibrium_batches(seed);
  push(batches.feasibility);
  push(batches.weak_duality);
  push(criterion_local_search(seed));
  push(criterion_lower_bound());
  push(criterion_greedy(seed));
  push(criterion_kk());
  push(criterion_embedding(seed));
  push(batches.cce);

  std::sort(out.criteria.begin(), out.criteria.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

}  // namespace poacert
