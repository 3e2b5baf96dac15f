#include <doctest.h>

#include "poacert/cost.hpp"
#include "poacert/dualfit.hpp"
#include "poacert/io.hpp"

using namespace poacert;

namespace {

const char* kCongestionJson = R"({
  "kind": "congestion",
  "resources": ["e1", "e2"],
  "players": [
    {"id": "a", "weight": 1.0, "strategies": [["e1"], ["e1", "e2"]],
     "processing": {"e1": 1.0, "e2": 2.0}},
    {"id": "b", "weight": 2.0, "strategies": [["e2"]], "processing": {"e2": 3.0}}
  ]
})";

const char* kAffineJson = R"({
  "kind": "affine",
  "resources": [{"id": "r1", "a": 1.0, "b": 0.5}, {"id": "r2", "a": 0.0, "b": 2.0}],
  "players": [
    {"id": "a", "strategies": [["r1"], ["r2"]], "resource_weights": {"r1": 1.0, "r2": 2.0}}
  ]
})";

}  // namespace

TEST_CASE("congestion instances round-trip through JSON") {
  const AnyInstance any = parse_instance(kCongestionJson);
  const auto* inst = std::get_if<CongestionInstance>(&any);
  REQUIRE(inst != nullptr);
  CHECK(inst->player_count() == 2);
  CHECK(inst->processing(1, 0) == 2.0);
  CHECK(inst->smith_ratio(1, 1) == doctest::Approx(1.5));

  const AnyInstance again = parse_instance(instance_to_json(*inst));
  CHECK(instance_to_json(std::get<CongestionInstance>(again)) == instance_to_json(*inst));
}

TEST_CASE("affine instances round-trip through JSON") {
  const AnyInstance any = parse_instance(kAffineJson);
  const auto* inst = std::get_if<AffineInstance>(&any);
  REQUIRE(inst != nullptr);
  CHECK(inst->a(0) == 1.0);
  CHECK(inst->b(1) == 2.0);
  CHECK(inst->resource_weight(1, 0) == 2.0);
  const AnyInstance again = parse_instance(instance_to_json(*inst));
  CHECK(instance_to_json(std::get<AffineInstance>(again)) == instance_to_json(*inst));
}

TEST_CASE("unknown resources are reported by name") {
  const char* bad = R"({"kind":"congestion","resources":["e1"],
    "players":[{"id":"a","weight":1.0,"strategies":[["e9"]],"processing":{"e1":1.0}}]})";
  try {
    parse_instance(bad);
    FAIL("expected UnknownResource");
  } catch (const Error& e) {
    CHECK(e.kind() == "UnknownResource");
    CHECK(std::string(e.what()).find("e9") != std::string::npos);
  }
}

TEST_CASE("assignments parse in both shapes") {
  const AnyInstance any = parse_instance(kCongestionJson);
  const auto& inst = std::get<CongestionInstance>(any);
  SUBCASE("pure shorthand") {
    const Assignment x = parse_assignment(inst, R"({"x": {"a": 1, "b": 0}})");
    CHECK(x.is_pure());
    CHECK(x.choice(0) == 1);
  }
  SUBCASE("probability vectors") {
    const Assignment x = parse_assignment(inst, R"({"x": {"a": [0.25, 0.75], "b": [1.0]}})");
    CHECK_FALSE(x.is_pure());
    CHECK(x.prob(0, 1) == 0.75);
  }
  SUBCASE("missing players are rejected") {
    CHECK_THROWS_AS(parse_assignment(inst, R"({"x": {"a": 0}})"), Error);
  }
  SUBCASE("round trip") {
    const Assignment x = parse_assignment(inst, R"({"x": {"a": 1, "b": 0}})");
    const Assignment y = parse_assignment(inst, assignment_to_json(inst, x));
    CHECK(y.choice(0) == 1);
    CHECK(y.choice(1) == 0);
  }
}

TEST_CASE("distributions parse and validate") {
  const AnyInstance any = parse_instance(kCongestionJson);
  const auto& inst = std::get<CongestionInstance>(any);
  const ProfileDistribution sigma = parse_distribution(
      inst, R"({"support": [{"x": {"a": 0, "b": 0}, "p": 0.5},
                            {"x": {"a": 1, "b": 0}, "p": 0.5}]})");
  CHECK(sigma.support.size() == 2);
  CHECK_THROWS_AS(parse_distribution(inst, R"({"support": []})"), Error);
  CHECK_THROWS_AS(
      parse_distribution(inst, R"({"support": [{"x": {"a": 0, "b": 0}, "p": 0.7}]})"), Error);
}

TEST_CASE("report serializations carry the documented keys") {
  const AnyInstance any = parse_instance(kCongestionJson);
  const auto& inst = std::get<CongestionInstance>(any);
  const Assignment x = parse_assignment(inst, R"({"x": {"a": 0, "b": 0}})");
  const std::string cost =
      cost_to_json(inst, social_cost(inst, x, Mechanism::SmithRule), false);
  CHECK(cost.find("\"social\"") != std::string::npos);
  CHECK(cost.find("\"perPlayer\"") != std::string::npos);

  FeasibilityReport rep;
  rep.scenario = Scenario::SmithRule4;
  const std::string fj = feasibility_report_to_json(rep);
  for (const char* key : {"scenario", "rho", "dualObjective", "socialCost", "ratio",
                          "maxViolationSet1", "maxViolationSet2", "gramMinEig", "pass"})
    CHECK(fj.find(key) != std::string::npos);
}

TEST_CASE("numbers print with twelve significant digits") {
  CHECK(format_number(2.0 / (3.0 + std::sqrt(5.0))) == "0.38196601125");  // 12th digit is 0
  CHECK(format_number(4.0 / (5.0 + std::sqrt(5.0))) == "0.5527864045");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("cost matrices export as dense arrays with an index legend") {
  const AnyInstance any = parse_instance(kCongestionJson);
  const auto& inst = std::get<CongestionInstance>(any);
  const std::string j = cost_matrix_to_json(build_cost_matrix(inst, GameKind::SmithRule));
  CHECK(j.find("\"kind\":\"smith\"") != std::string::npos);
  CHECK(j.find("\"offsets\"") != std::string::npos);
  CHECK(j.find("\"matrix\"") != std::string::npos);
}

TEST_CASE("missing files raise io errors") {
  try {
    read_file("/nonexistent/path.json");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == "io");
  }
}

TEST_CASE("scenario names round-trip") {
  for (Scenario s : {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133,
                     Scenario::RandUniform2, Scenario::RandPoA2, Scenario::AffineCG,
                     Scenario::JumpOptFit, Scenario::JumpOptRestricted, Scenario::ImprovedLSFit,
                     Scenario::GreedyFit, Scenario::KKHighP, Scenario::KKLowP})
    CHECK(scenario_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(scenario_from_string("nope"), Error);
}
