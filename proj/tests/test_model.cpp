#include <doctest.h>

#include "poacert/generators.hpp"
#include "poacert/model.hpp"

using namespace poacert;

namespace {

CongestionInstance two_resource_instance() {
  RawPlayer p;
  p.id = "j1";
  p.weight = 1.0;
  p.strategies = {{0}, {0, 1}};
  p.processing = {1.0, 2.0, std::numeric_limits<double>::quiet_NaN()};
  return CongestionInstance({"e1", "e2", "e3"}, {p});
}

}  // namespace

TEST_CASE("identity instance validates with unit Smith ratio") {
  RawPlayer p{"j1", 1.0, {{0}}, {1.0}};
  const CongestionInstance inst({"e1"}, {p});
  CHECK(inst.player_count() == 1);
  CHECK(inst.smith_ratio(0, 0) == 1.0);
  CHECK(inst.is_scheduling());
}

TEST_CASE("smith ratio is processing over weight") {
  RawPlayer p{"j1", 2.0, {{0}}, {3.0}};
  const CongestionInstance inst({"e"}, {p});
  CHECK(inst.smith_ratio(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("validation rejects malformed players") {
  SUBCASE("undeclared resource") {
    RawPlayer p{"j1", 1.0, {{9}}, {1.0}};
    CHECK_THROWS_WITH_AS(CongestionInstance({"e1"}, {p}), doctest::Contains("9"), Error);
    try {
      CongestionInstance({"e1"}, {p});
    } catch (const Error& e) {
      CHECK(e.kind() == "UnknownResource");
    }
  }
  SUBCASE("empty strategy list") {
    RawPlayer p{"j1", 1.0, {}, {1.0}};
    try {
      CongestionInstance({"e1"}, {p});
      FAIL("expected EmptyStrategy");
    } catch (const Error& e) {
      CHECK(e.kind() == "EmptyStrategy");
    }
  }
  SUBCASE("negative weight") {
    RawPlayer p{"j1", -1.0, {{0}}, {1.0}};
    try {
      CongestionInstance({"e1"}, {p});
      FAIL("expected NegativeValue");
    } catch (const Error& e) {
      CHECK(e.kind() == "NegativeValue");
    }
  }
  SUBCASE("missing processing time") {
    RawPlayer p{"j1", 1.0, {{0}}, {}};
    try {
      CongestionInstance({"e1"}, {p});
      FAIL("expected MissingProcessingTime");
    } catch (const Error& e) {
      CHECK(e.kind() == "MissingProcessingTime");
    }
  }
  SUBCASE("duplicate strategy") {
    RawPlayer p{"j1", 1.0, {{0}, {0}}, {1.0}};
    CHECK_THROWS_AS(CongestionInstance({"e1"}, {p}), Error);
  }
}

TEST_CASE("usage marginals") {
  const CongestionInstance inst = two_resource_instance();
  SUBCASE("pure strategy marks its resources") {
    const Assignment x = Assignment::pure_for(inst, {1});
    const Eigen::MatrixXd z = usage_marginals(inst, x);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(1, 0) == 1.0);
    CHECK(z(2, 0) == 0.0);
  }
  SUBCASE("mixed assignment accumulates probabilities") {
    const Assignment x = Assignment::mixed({{0.5, 0.5}});
    const Eigen::MatrixXd z = usage_marginals(inst, x);
    CHECK(z(0, 0) == doctest::Approx(1.0));
    CHECK(z(1, 0) == doctest::Approx(0.5));
    CHECK(z(2, 0) == 0.0);
  }
}

TEST_CASE("pure marginals are exactly binary") {
  SplitMix64 rng(7);
  for (int t = 0; t < 20; ++t) {
    RandomProfile prof;
    prof.players = 1 + rng.below(4);
    prof.resources = 1 + rng.below(4);
    const CongestionInstance inst = gen_random(rng.next(), prof);
    std::vector<int> choice(inst.player_count());
    for (int j = 0; j < inst.player_count(); ++j) choice[j] = rng.below(inst.strategy_count(j));
    const Eigen::MatrixXd z = usage_marginals(inst, Assignment::pure_for(inst, choice));
    for (int e = 0; e < inst.resource_count(); ++e)
      for (int j = 0; j < inst.player_count(); ++j)
        CHECK((z(e, j) == 0.0 || z(e, j) == 1.0));
  }
}

TEST_CASE("precedes is a strict total order per resource") {
  SUBCASE("smaller ratio first") {
    RawPlayer a{"a", 1.0, {{0}}, {1.0}};
    RawPlayer b{"b", 1.0, {{0}}, {2.0}};
    const CongestionInstance inst({"e"}, {a, b});
    CHECK(inst.precedes(0, 0, 1));
    CHECK_FALSE(inst.precedes(0, 1, 0));
  }
  SUBCASE("equal ratios break by declaration index") {
    RawPlayer a{"a", 1.0, {{0}}, {1.0}};
    RawPlayer b{"b", 2.0, {{0}}, {2.0}};
    const CongestionInstance inst({"e"}, {a, b});
    CHECK(inst.precedes(0, 0, 1));
    CHECK_FALSE(inst.precedes(0, 1, 0));
  }
  SUBCASE("irreflexive") {
    RawPlayer a{"a", 1.0, {{0}}, {1.0}};
    const CongestionInstance inst({"e"}, {a});
    CHECK_FALSE(inst.precedes(0, 0, 0));
  }
  SUBCASE("asymmetric, transitive, total on random instances") {
    SplitMix64 rng(13);
    for (int t = 0; t < 10; ++t) {
      RandomProfile prof;
      prof.players = 4;
      prof.resources = 2;
      const CongestionInstance inst = gen_random(rng.next(), prof);
      for (int e = 0; e < inst.resource_count(); ++e)
        for (int a = 0; a < inst.player_count(); ++a)
          for (int b = 0; b < inst.player_count(); ++b) {
            if (a == b) continue;
            CHECK(inst.precedes(e, a, b) != inst.precedes(e, b, a));
            for (int c = 0; c < inst.player_count(); ++c)
              if (c != a && c != b && inst.precedes(e, a, b) && inst.precedes(e, b, c))
                CHECK(inst.precedes(e, a, c));
          }
    }
  }
}

TEST_CASE("zero-weight players precede everyone") {
  RawPlayer a{"a", 0.0, {{0}}, {5.0}};
  RawPlayer b{"b", 1.0, {{0}}, {0.5}};
  const CongestionInstance inst({"e"}, {a, b});
  CHECK(inst.smith_ratio(0, 0) == 0.0);
  CHECK(inst.precedes(0, 0, 1));
}

TEST_CASE("scheduling helper produces singleton strategies") {
  const CongestionInstance inst =
      make_scheduling_instance(2, {"a", "b"}, {1.0, 2.0}, {{{0, 1.0}, {1, 2.0}}, {{1, 3.0}}});
  CHECK(inst.is_scheduling());
  CHECK(inst.strategy_count(0) == 2);
  CHECK(inst.strategy(0, 1) == std::vector<int>{1});
  CHECK(inst.processing(1, 1) == 3.0);
  CHECK(inst.smith_ratio(1, 1) == doctest::Approx(1.5));
}

TEST_CASE("assignments validate shape and probabilities") {
  const CongestionInstance inst = two_resource_instance();
  CHECK_THROWS_AS(Assignment::pure_for(inst, {5}), Error);
  CHECK_THROWS_AS(Assignment::mixed({{0.5, 0.4}}), Error);
  CHECK_THROWS_AS(Assignment::mixed({{1.2, -0.2}}), Error);
  const Assignment mixed = Assignment::mixed({{0.25, 0.75}});
  CHECK_FALSE(mixed.is_pure());
  CHECK_THROWS_AS(mixed.choice(0), Error);
  const Assignment point = Assignment::mixed({{0.0, 1.0}});
  CHECK(point.is_pure());
  CHECK(point.choice(0) == 1);
}
