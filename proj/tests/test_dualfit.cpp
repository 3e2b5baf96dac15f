#include <doctest.h>

#include <cmath>
#include <numeric>

#include "poacert/cost.hpp"
#include "poacert/dualfit.hpp"
#include "poacert/generators.hpp"
#include "poacert/localsearch.hpp"
#include "poacert/online.hpp"
#include "poacert/oracle.hpp"

using namespace poacert;

namespace {

CongestionInstance two_by_two() {
  return make_scheduling_instance(2, {"a", "b"}, {1.0, 1.0},
                                  {{{0, 1.0}, {1, 1.0}}, {{0, 1.0}, {1, 1.0}}});
}

}  // namespace

TEST_CASE("scenario constants match the closed forms to twelve digits") {
  const double s5 = std::sqrt(5.0);
  struct Row {
    Scenario s;
    double rho;
  };
  for (const Row& row : {Row{Scenario::PropSharing, 2.0 / (3.0 + s5)},
                         Row{Scenario::Rand2133, 15.0 / 32.0},
                         Row{Scenario::RandUniform2, 0.5},
                         Row{Scenario::ImprovedLSFit, 4.0 / (5.0 + s5)}}) {
    const ScenarioConstants c = scenario_constants(row.s);
    CHECK(std::abs(c.rho - row.rho) <= 1e-12 * row.rho);
    for (double r : c.residuals) CHECK(r <= 1e-12);
  }
  CHECK(scenario_constants(Scenario::PropSharing).rho == doctest::Approx(0.381966011250105));
  CHECK(scenario_constants(Scenario::Rand2133).rho == doctest::Approx(0.46875));
  CHECK(scenario_constants(Scenario::ImprovedLSFit).rho == doctest::Approx(0.552786404500042));
}

TEST_CASE("frozen Smith fitting on the split two-by-two equilibrium") {
  const CongestionInstance inst = two_by_two();
  const Assignment ne = Assignment::pure_for(inst, {0, 1});
  const DualSolution sol = fit_dual(Scenario::SmithRule4, inst, Certificate(ne));
  CHECK(sol.y[0] == doctest::Approx(0.5));
  CHECK(sol.y[1] == doctest::Approx(0.5));
  CHECK(norm_squared(sol.v0) == doctest::Approx(0.5));

  const FeasibilityReport rep = verify_dual(Scenario::SmithRule4, inst, Certificate(ne), sol);
  CHECK(rep.pass);
  CHECK(rep.dual_objective == doctest::Approx(0.75));
  CHECK(rep.social_cost == doctest::Approx(2.0));
  CHECK(rep.ratio == doctest::Approx(0.375));
  CHECK(rep.ratio >= 0.25);

  // the Smith fitting satisfies the second constraint family with equality on
  // every pair of strategies sharing a resource
  for (int i = 0; i < 2; ++i)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double ip = inner_product(sol.vec(0, i), sol.vec(1, i2));
      const double bound = i == i2 ? 1.0 : 0.0;  // w w min{1,1} on the shared machine
      CHECK(ip == doctest::Approx(bound).epsilon(1e-9));
    }
}

TEST_CASE("single-player fittings are feasible with no cross terms") {
  RawPlayer p{"j", 2.0, {{0}, {1}}, {1.0, 3.0}};
  const CongestionInstance inst({"e1", "e2"}, {p});
  const Assignment ne = Assignment::pure_for(inst, {0});
  for (Scenario s : {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133,
                     Scenario::RandPoA2}) {
    const DualSolution sol = fit_dual(s, inst, Certificate(ne));
    const FeasibilityReport rep = verify_dual(s, inst, Certificate(ne), sol);
    CHECK(rep.pass);
  }
}

TEST_CASE("fittings verify on every enumerated equilibrium of random instances") {
  SplitMix64 rng(71);
  int verified = 0;
  for (int t = 0; t < 25; ++t) {
    RandomProfile prof;
    prof.players = 2 + rng.below(3);
    prof.resources = 2 + rng.below(2);
    prof.max_strategy_size = 2;
    if (t % 3 == 0) prof.kind = RandomProfile::Kind::UniformRatio;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    const double smith_opt = brute_force_opt(inst, Mechanism::SmithRule).value;
    const double rand_opt = brute_force_opt(inst, Mechanism::Rand).value;

    for (Mechanism m : {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
      const Scenario s = m == Mechanism::SmithRule ? Scenario::SmithRule4
                         : m == Mechanism::ProportionalSharing ? Scenario::PropSharing
                                                               : Scenario::Rand2133;
      for (const auto& choice : enumerate_pure_equilibria(inst, m)) {
        const Assignment ne = Assignment::pure_for(inst, choice);
        const DualSolution sol = fit_dual(s, inst, Certificate(ne));
        const FeasibilityReport rep = verify_dual(s, inst, Certificate(ne), sol);
        CHECK(rep.pass);
        CHECK(rep.dual_objective <= smith_opt * (1 + 1e-9) + 1e-12);  // weak duality
        ++verified;
        if (m == Mechanism::Rand) {
          const DualSolution poa = fit_dual(Scenario::RandPoA2, inst, Certificate(ne));
          const FeasibilityReport prep =
              verify_dual(Scenario::RandPoA2, inst, Certificate(ne), poa);
          CHECK(prep.pass);
          CHECK(prep.dual_objective <= rand_opt * (1 + 1e-9) + 1e-12);
          if (prof.kind == RandomProfile::Kind::UniformRatio) {
            const DualSolution uni = fit_dual(Scenario::RandUniform2, inst, Certificate(ne));
            CHECK(verify_dual(Scenario::RandUniform2, inst, Certificate(ne), uni).pass);
          }
        }
      }
    }
  }
  CHECK(verified > 10);
}

TEST_CASE("mixed equilibria certify through the same fittings") {
  // both players mixing uniformly over the two identical machines is a mixed
  // Nash equilibrium by symmetry
  const CongestionInstance inst = two_by_two();
  const Assignment mixed = Assignment::mixed({{0.5, 0.5}, {0.5, 0.5}});
  REQUIRE(check_equilibrium(inst, mixed, Mechanism::SmithRule).is_equilibrium);
  for (Scenario s : {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133}) {
    const DualSolution sol = fit_dual(s, inst, Certificate(mixed));
    CHECK(verify_dual(s, inst, Certificate(mixed), sol).pass);
  }
}

TEST_CASE("KK fittings hit the closed-form optimum") {
  SUBCASE("high-p case: m=2, k=1, p=2 gives objective 6") {
    const KKInstance kk = gen_kk({2, 1, 2.0, 0.01});
    CHECK(kk.high_p);
    const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
    const DualSolution sol = fit_dual(Scenario::KKHighP, kk.instance, Certificate(cert));
    const FeasibilityReport rep =
        verify_dual(Scenario::KKHighP, kk.instance, Certificate(cert), sol);
    CHECK(rep.pass);
    CHECK(rep.dual_objective == doctest::Approx(6.0).epsilon(1e-12));
  }
  SUBCASE("low-p case: m=4, k=1, p=1 gives objective 3.625") {
    const KKInstance kk = gen_kk({4, 1, 1.0, 0.01});
    CHECK_FALSE(kk.high_p);
    const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
    const DualSolution sol = fit_dual(Scenario::KKLowP, kk.instance, Certificate(cert));
    const FeasibilityReport rep =
        verify_dual(Scenario::KKLowP, kk.instance, Certificate(cert), sol);
    CHECK(rep.pass);
    CHECK(rep.dual_objective == doctest::Approx(3.625).epsilon(1e-12));
  }
  SUBCASE("case gates reject mismatched parameters") {
    const KKInstance kk = gen_kk({4, 1, 1.0, 0.01});  // p=1 < alpha=4/3
    const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
    CHECK_THROWS_AS(fit_dual(Scenario::KKHighP, kk.instance, Certificate(cert)), Error);
  }
}

TEST_CASE("JumpOpt fitting: objective equals rho * (2C - eta)") {
  SplitMix64 rng(72);
  const ScenarioConstants c = scenario_constants(Scenario::JumpOptFit);
  for (int t = 0; t < 10; ++t) {
    RandomProfile prof;
    prof.kind = RandomProfile::Kind::Scheduling;
    prof.players = 3 + rng.below(4);
    prof.resources = 2 + rng.below(2);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> order(inst.player_count());
    std::iota(order.begin(), order.end(), 0);
    const SearchResult jo = jump_opt(inst, greedy_online(inst, order).x, 5000);
    REQUIRE(jo.converged);
    const DualSolution sol = fit_dual(Scenario::JumpOptFit, inst, Certificate(jo.x));
    const FeasibilityReport rep = verify_dual(Scenario::JumpOptFit, inst, Certificate(jo.x), sol);
    const CostBreakdown cb = social_cost(inst, jo.x, Mechanism::SmithRule);
    CHECK(rep.pass);
    CHECK(rep.dual_objective ==
          doctest::Approx(c.rho * (2 * cb.social - cb.eta)).epsilon(1e-9));
    CHECK(rep.strong_bound == doctest::Approx(c.rho * (2 * cb.social - cb.eta)));
  }
}

TEST_CASE("greedy fitting telescopes: sum(y) = C/2") {
  SplitMix64 rng(73);
  for (int t = 0; t < 10; ++t) {
    RandomProfile prof;
    prof.players = 2 + rng.below(4);
    prof.resources = 2 + rng.below(2);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> order(inst.player_count());
    std::iota(order.begin(), order.end(), 0);
    const GreedyRun run = greedy_online(inst, order);
    const DualSolution sol = fit_dual(Scenario::GreedyFit, inst, Certificate(run));
    const FeasibilityReport rep = verify_dual(Scenario::GreedyFit, inst, Certificate(run), sol);
    CHECK(rep.pass);
    CHECK(rep.y_sum == doctest::Approx(0.5 * rep.social_cost).epsilon(1e-9));
    CHECK(rep.ratio >= 0.25 - 1e-8);
  }
}

TEST_CASE("affine fitting certifies enumerated equilibria") {
  SplitMix64 rng(74);
  const double bound = (3.0 + std::sqrt(5.0)) / 2.0;
  int verified = 0;
  for (int t = 0; t < 15; ++t) {
    RandomAffineProfile prof;
    prof.players = 2 + rng.below(3);
    prof.resources = 2 + rng.below(2);
    const AffineInstance inst = gen_random_affine(rng.next(), prof);
    const double opt = brute_force_opt(inst).value;
    for (const auto& choice : enumerate_pure_equilibria(inst)) {
      const Assignment ne = Assignment::pure_for(inst, choice);
      const DualSolution sol = fit_dual(inst, ne);
      const FeasibilityReport rep = verify_dual(inst, ne, sol);
      CHECK(rep.pass);
      CHECK(rep.dual_objective <= opt * (1 + 1e-9) + 1e-12);
      CHECK(rep.social_cost <= bound * opt * (1 + 1e-6) + 1e-12);
      ++verified;
    }
  }
  CHECK(verified > 5);
}

TEST_CASE("corrupted solutions are rejected") {
  const CongestionInstance inst = two_by_two();
  const Assignment ne = Assignment::pure_for(inst, {0, 1});
  SUBCASE("oversized y breaks the first constraint family") {
    DualSolution sol = fit_dual(Scenario::SmithRule4, inst, Certificate(ne));
    sol.y[0] += 5.0;
    const FeasibilityReport rep = verify_dual(Scenario::SmithRule4, inst, Certificate(ne), sol);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_violation_set1 > 1e-8);
  }
  SUBCASE("inflated vectors break the tight second family") {
    DualSolution sol = fit_dual(Scenario::SmithRule4, inst, Certificate(ne));
    for (auto& v : sol.v)
      for (auto& step : v.f) step.height *= 1.1;
    const FeasibilityReport rep = verify_dual(Scenario::SmithRule4, inst, Certificate(ne), sol);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_violation_set2 > 1e-8);
  }
  SUBCASE("ten-percent y inflation breaks the tight KK fitting") {
    const KKInstance kk = gen_kk({2, 1, 2.0, 0.01});
    const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
    DualSolution sol = fit_dual(Scenario::KKHighP, kk.instance, Certificate(cert));
    for (double& y : sol.y) y *= 1.1;
    const FeasibilityReport rep =
        verify_dual(Scenario::KKHighP, kk.instance, Certificate(cert), sol);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_violation_set1 > 1e-8);
  }
}

TEST_CASE("certificate gates") {
  SUBCASE("uniform-ratio scenario rejects non-uniform instances") {
    const CongestionInstance inst = make_scheduling_instance(
        1, {"a", "b"}, {1.0, 1.0}, {{{0, 1.0}}, {{0, 2.0}}});
    const Assignment ne = Assignment::pure_for(inst, {0, 0});
    CHECK_THROWS_AS(fit_dual(Scenario::RandUniform2, inst, Certificate(ne)), Error);
  }
  SUBCASE("JumpOpt scenarios need scheduling instances") {
    RawPlayer p{"j", 1.0, {{0, 1}}, {1.0, 1.0}};
    const CongestionInstance inst({"e1", "e2"}, {p});
    CHECK_THROWS_AS(
        fit_dual(Scenario::JumpOptFit, inst, Certificate(Assignment::pure_for(inst, {0}))),
        Error);
  }
  SUBCASE("restricted scenario needs per-job uniform processing") {
    const CongestionInstance inst = make_scheduling_instance(
        2, {"a"}, {1.0}, {{{0, 1.0}, {1, 2.0}}});
    CHECK_THROWS_AS(fit_dual(Scenario::JumpOptRestricted, inst,
                             Certificate(Assignment::pure_for(inst, {0}))),
                    Error);
  }
  SUBCASE("greedy scenario needs a trace certificate") {
    const CongestionInstance inst = two_by_two();
    CHECK_THROWS_AS(
        fit_dual(Scenario::GreedyFit, inst, Certificate(Assignment::pure_for(inst, {0, 1}))),
        Error);
  }
}

TEST_CASE("coarse-correlated verification") {
  const CongestionInstance inst = two_by_two();
  const Assignment split_a = Assignment::pure_for(inst, {0, 1});
  const Assignment split_b = Assignment::pure_for(inst, {1, 0});

  SUBCASE("point mass reproduces the pure verification") {
    ProfileDistribution point;
    point.support.push_back({split_a, 1.0});
    for (Scenario s : {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133}) {
      const FeasibilityReport cce = verify_dual_cce(s, inst, point);
      const DualSolution sol = fit_dual(s, inst, Certificate(split_a));
      const FeasibilityReport pure = verify_dual(s, inst, Certificate(split_a), sol);
      CHECK(cce.pass);
      CHECK(cce.dual_objective == doctest::Approx(pure.dual_objective).epsilon(1e-12));
      CHECK(cce.social_cost == doctest::Approx(pure.social_cost).epsilon(1e-12));
    }
  }
  SUBCASE("mixtures of equilibria verify with a PSD expected Gram") {
    ProfileDistribution mix;
    mix.support.push_back({split_a, 0.5});
    mix.support.push_back({split_b, 0.5});
    for (Scenario s : {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133}) {
      const FeasibilityReport rep = verify_dual_cce(s, inst, mix);
      CHECK(rep.pass);
      CHECK(rep.gram_min_eig >= -1e-8 * rep.gram_trace);
      CHECK(rep.dual_objective >= rep.rho * rep.social_cost - 1e-8 * rep.social_cost);
    }
  }
  SUBCASE("non-equilibrium distributions are refused") {
    ProfileDistribution bad;
    bad.support.push_back({Assignment::pure_for(inst, {0, 0}), 1.0});
    CHECK_THROWS_AS(verify_dual_cce(Scenario::SmithRule4, inst, bad), Error);
  }
}
