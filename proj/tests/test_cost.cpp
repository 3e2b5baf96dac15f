#include <doctest.h>

#include "poacert/cost.hpp"
#include "poacert/generators.hpp"
#include "support/oracles.hpp"

using namespace poacert;

namespace {

/// One machine, jobs (w=1,p=1) and (w=1,p=2).
CongestionInstance two_jobs_one_machine() {
  return make_scheduling_instance(1, {"a", "b"}, {1.0, 1.0}, {{{0, 1.0}}, {{0, 2.0}}});
}

}  // namespace

TEST_CASE("frozen costs of the two-job machine") {
  const CongestionInstance inst = two_jobs_one_machine();
  const Assignment x = Assignment::pure_for(inst, {0, 0});
  // Smith order (a, b): completions 1 and 3; PS sharing completes at 2 and 3;
  // Rand expectation 5/3 + 8/3.
  CHECK(social_cost(inst, x, Mechanism::SmithRule).social == doctest::Approx(4.0));
  CHECK(social_cost(inst, x, Mechanism::ProportionalSharing).social == doctest::Approx(5.0));
  CHECK(social_cost(inst, x, Mechanism::Rand).social == doctest::Approx(13.0 / 3.0));
}

TEST_CASE("single player pays its processing sum under every mechanism") {
  RawPlayer p{"j", 2.0, {{0, 1}}, {1.0, 3.0}};
  const CongestionInstance inst({"e1", "e2"}, {p});
  const Assignment x = Assignment::pure_for(inst, {0});
  for (Mechanism m : {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
    const CostBreakdown c = social_cost(inst, x, m);
    CHECK(c.per_player[0] == doctest::Approx(4.0));
    CHECK(c.social == doctest::Approx(8.0));
  }
}

TEST_CASE("identical jobs make Rand equal Smith's Rule") {
  const CongestionInstance inst =
      make_scheduling_instance(1, {"a", "b"}, {1.0, 1.0}, {{{0, 1.0}}, {{0, 1.0}}});
  const Assignment x = Assignment::pure_for(inst, {0, 0});
  CHECK(social_cost(inst, x, Mechanism::Rand).social == doctest::Approx(3.0));
  CHECK(social_cost(inst, x, Mechanism::SmithRule).social == doctest::Approx(3.0));
}

TEST_CASE("formula costs match event-driven simulation on random pure profiles") {
  SplitMix64 rng(101);
  for (int t = 0; t < 40; ++t) {
    RandomProfile prof;
    prof.players = 1 + rng.below(5);
    prof.resources = 1 + rng.below(3);
    prof.max_strategy_size = 2;
    if (t % 2 == 0) prof.kind = RandomProfile::Kind::Scheduling;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> choice(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
    const Assignment x = Assignment::pure_for(inst, choice);
    for (Mechanism m : {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
      const double formula = social_cost(inst, x, m).social;
      const double simulated = testing::simulated_social_cost(inst, x, m);
      CHECK(formula == doctest::Approx(simulated).epsilon(1e-9));
    }
  }
}

TEST_CASE("mixed costs equal the exhaustive product-distribution expectation") {
  SplitMix64 rng(102);
  for (int t = 0; t < 15; ++t) {
    RandomProfile prof;
    prof.players = 1 + rng.below(3);
    prof.resources = 1 + rng.below(2);
    prof.max_strategies = 2;
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<std::vector<double>> probs(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) {
      probs[j].assign(inst.strategy_count(j), 0.0);
      double rest = 1.0;
      for (int i = 0; i + 1 < inst.strategy_count(j); ++i) {
        probs[j][i] = rest * rng.uniform(0.0, 1.0);
        rest -= probs[j][i];
      }
      probs[j][inst.strategy_count(j) - 1] = rest;
    }
    const Assignment x = Assignment::mixed(probs);
    for (Mechanism m : {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
      const double formula = social_cost(inst, x, m).social;
      const double expectation = testing::mixed_expectation(inst, x, m);
      CHECK(formula == doctest::Approx(expectation).epsilon(1e-9));
    }
  }
}

TEST_CASE("scheduling identities: C = eta + sum D_j and weighted sum consistency") {
  SplitMix64 rng(103);
  for (int t = 0; t < 25; ++t) {
    RandomProfile prof;
    prof.kind = RandomProfile::Kind::Scheduling;
    prof.players = 2 + rng.below(4);
    prof.resources = 2 + rng.below(3);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> choice(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
    const CostBreakdown c =
        social_cost(inst, Assignment::pure_for(inst, choice), Mechanism::SmithRule);
    double d_sum = 0.0, w_sum = 0.0;
    for (int j = 0; j < inst.player_count(); ++j) {
      d_sum += c.delay[j];
      w_sum += c.weighted[j];
    }
    CHECK(c.social == doctest::Approx(c.eta + d_sum).epsilon(1e-9));
    CHECK(c.social == doctest::Approx(w_sum).epsilon(1e-9));
    CHECK(c.eta <= c.social + 1e-12);
  }
}

TEST_CASE("Smith's Rule is the cheapest mechanism pointwise") {
  SplitMix64 rng(104);
  for (int t = 0; t < 25; ++t) {
    RandomProfile prof;
    prof.players = 2 + rng.below(4);
    prof.resources = 1 + rng.below(3);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> choice(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
    const Assignment x = Assignment::pure_for(inst, choice);
    const double smith = social_cost(inst, x, Mechanism::SmithRule).social;
    CHECK(smith <= social_cost(inst, x, Mechanism::ProportionalSharing).social + 1e-9);
    CHECK(smith <= social_cost(inst, x, Mechanism::Rand).social + 1e-9);
  }
}

TEST_CASE("deviation costs") {
  SUBCASE("single player: literal and exact agree with the processing sum") {
    RawPlayer p{"j", 1.0, {{0}, {1}}, {1.0, 4.0}};
    const CongestionInstance inst({"e1", "e2"}, {p});
    const Assignment x = Assignment::pure_for(inst, {0});
    for (bool literal : {false, true}) {
      CHECK(deviation_cost(inst, x, 0, 1, Mechanism::SmithRule, literal) == doctest::Approx(4.0));
      CHECK(deviation_cost(inst, x, 0, 1, Mechanism::ProportionalSharing, literal) ==
            doctest::Approx(4.0));
    }
  }
  SUBCASE("one predecessor term under Smith's Rule") {
    // k occupies the target machine with the smaller ratio
    const CongestionInstance inst = make_scheduling_instance(
        2, {"k", "j"}, {1.0, 1.0}, {{{0, 1.0}}, {{0, 3.0}, {1, 3.0}}});
    const Assignment x = Assignment::pure_for(inst, {0, 1});
    CHECK(deviation_cost(inst, x, 1, 0, Mechanism::SmithRule, true) == doctest::Approx(4.0));
    CHECK(deviation_cost(inst, x, 1, 0, Mechanism::SmithRule, false) == doctest::Approx(4.0));
  }
  SUBCASE("PS literal adds the deviator's own usage on overlapping strategies") {
    RawPlayer p{"j", 1.0, {{0}, {0, 1}}, {2.0, 1.0}};
    RawPlayer q{"q", 1.0, {{0}}, {1.0}};
    const CongestionInstance inst({"e1", "e2"}, {p, q});
    const Assignment x = Assignment::pure_for(inst, {0, 0});
    const double exact = deviation_cost(inst, x, 0, 1, Mechanism::ProportionalSharing, false);
    const double literal = deviation_cost(inst, x, 0, 1, Mechanism::ProportionalSharing, true);
    // own usage on the shared resource e1 adds p_{e1,j} * z_{e1,j} = 2
    CHECK(literal == doctest::Approx(exact + 2.0));
    CHECK(deviation_cost(inst, x, 0, 1, Mechanism::SmithRule, true) ==
          deviation_cost(inst, x, 0, 1, Mechanism::SmithRule, false));
  }
  SUBCASE("strategy out of range") {
    const CongestionInstance inst = two_jobs_one_machine();
    CHECK_THROWS_AS(deviation_cost(inst, Assignment::pure_for(inst, {0, 0}), 0, 3,
                                   Mechanism::SmithRule, false),
                    Error);
  }
}

TEST_CASE("affine costs") {
  SUBCASE("single player with quadratic latency") {
    RawAffinePlayer p{"j", {{0}}, {2.0}};
    const AffineInstance inst({{"r", 1.0, 0.0}}, {p});
    const CostBreakdown c = affine_cost(inst, Assignment::pure_for(inst, {0}));
    CHECK(c.social == doctest::Approx(4.0));
  }
  SUBCASE("two unit players sharing a resource") {
    RawAffinePlayer p{"a", {{0}}, {1.0}};
    RawAffinePlayer q{"b", {{0}}, {1.0}};
    const AffineInstance inst({{"r", 1.0, 1.0}}, {p, q});
    const CostBreakdown c = affine_cost(inst, Assignment::pure_for(inst, {0, 0}));
    CHECK(c.social == doctest::Approx(6.0));
  }
  SUBCASE("zero quadratic coefficient leaves the linear part") {
    RawAffinePlayer p{"a", {{0, 1}}, {1.0, 2.0}};
    const AffineInstance inst({{"r1", 0.0, 2.0}, {"r2", 0.0, 1.0}}, {p});
    const CostBreakdown c = affine_cost(inst, Assignment::pure_for(inst, {0}));
    CHECK(c.social == doctest::Approx(2.0 + 2.0));
  }
  SUBCASE("player costs sum to the social cost") {
    SplitMix64 rng(105);
    for (int t = 0; t < 20; ++t) {
      RandomAffineProfile prof;
      prof.players = 1 + rng.below(4);
      prof.resources = 1 + rng.below(3);
      const AffineInstance inst = gen_random_affine(rng.next(), prof);
      std::vector<int> choice(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
      const CostBreakdown c = affine_cost(inst, Assignment::pure_for(inst, choice));
      double sum = 0.0;
      for (double v : c.per_player) sum += v;
      CHECK(c.social == doctest::Approx(sum).epsilon(1e-9));
    }
  }
  SUBCASE("mixed assignments are rejected") {
    RawAffinePlayer p{"a", {{0}, {1}}, {1.0, 1.0}};
    const AffineInstance inst({{"r1", 1.0, 0.0}, {"r2", 1.0, 0.0}}, {p});
    CHECK_THROWS_AS(affine_cost(inst, Assignment::mixed({{0.5, 0.5}})), Error);
  }
}

TEST_CASE("rand tie probability at zero ratios is one half") {
  CHECK(rand_after_prob(0.0, 0.0) == 0.5);
  CHECK(rand_after_prob(0.0, 1.0) == 0.0);
  CHECK(rand_after_prob(1.0, 0.0) == 1.0);
}

TEST_CASE("zero-weight players precede and delay but contribute no weighted cost") {
  const CongestionInstance inst =
      make_scheduling_instance(1, {"z", "b"}, {0.0, 1.0}, {{{0, 5.0}}, {{0, 1.0}}});
  const Assignment x = Assignment::pure_for(inst, {0, 0});
  for (Mechanism m : {Mechanism::SmithRule, Mechanism::ProportionalSharing, Mechanism::Rand}) {
    const CostBreakdown c = social_cost(inst, x, m);
    CHECK(c.weighted[0] == 0.0);
    CHECK(c.per_player[1] == doctest::Approx(6.0));  // queued behind the weightless job
    CHECK(c.social == doctest::Approx(6.0));
  }
}
