#include "poacert/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace poacert {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("io", "cannot write " + path);
  out << contents;
}

namespace {

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail("io", "malformed JSON input");
  return j;
}

std::map<std::string, int> id_index(const json& resources, bool objects) {
  std::map<std::string, int> idx;
  int e = 0;
  for (const auto& r : resources) {
    const std::string id = objects ? r.at("id").get<std::string>() : r.get<std::string>();
    if (!idx.insert({id, e++}).second) fail("UnknownResource", "duplicate resource id " + id);
  }
  return idx;
}

std::vector<std::vector<int>> parse_strategies(const json& arr,
                                               const std::map<std::string, int>& idx,
                                               const std::string& player) {
  std::vector<std::vector<int>> out;
  for (const auto& s : arr) {
    std::vector<int> strat;
    for (const auto& rid : s) {
      const std::string id = rid.get<std::string>();
      auto it = idx.find(id);
      if (it == idx.end())
        fail("UnknownResource", "player " + player + " references unknown resource " + id);
      strat.push_back(it->second);
    }
    out.push_back(std::move(strat));
  }
  return out;
}

}  // namespace

AnyInstance parse_instance(const std::string& json_text) {
  const json j = parse_json(json_text);
  const std::string kind = j.value("kind", "congestion");
  if (kind == "congestion") {
    const auto idx = id_index(j.at("resources"), /*objects=*/false);
    std::vector<std::string> resources;
    for (const auto& r : j.at("resources")) resources.push_back(r.get<std::string>());

    std::vector<RawPlayer> players;
    for (const auto& p : j.at("players")) {
      RawPlayer pl;
      pl.id = p.at("id").get<std::string>();
      pl.weight = p.at("weight").get<double>();
      pl.strategies = parse_strategies(p.at("strategies"), idx, pl.id);
      pl.processing.assign(resources.size(), std::numeric_limits<double>::quiet_NaN());
      if (p.contains("processing"))
        for (const auto& [rid, value] : p.at("processing").items()) {
          auto it = idx.find(rid);
          if (it == idx.end())
            fail("UnknownResource", "player " + pl.id + " gives processing for unknown " + rid);
          pl.processing[it->second] = value.get<double>();
        }
      players.push_back(std::move(pl));
    }
    return CongestionInstance(std::move(resources), std::move(players));
  }
  if (kind == "affine") {
    const auto idx = id_index(j.at("resources"), /*objects=*/true);
    std::vector<AffineResource> resources;
    for (const auto& r : j.at("resources"))
      resources.push_back(
          {r.at("id").get<std::string>(), r.at("a").get<double>(), r.at("b").get<double>()});
    std::vector<RawAffinePlayer> players;
    for (const auto& p : j.at("players")) {
      RawAffinePlayer pl;
      pl.id = p.at("id").get<std::string>();
      pl.strategies = parse_strategies(p.at("strategies"), idx, pl.id);
      pl.resource_weights.assign(resources.size(), std::numeric_limits<double>::quiet_NaN());
      if (p.contains("resource_weights"))
        for (const auto& [rid, value] : p.at("resource_weights").items()) {
          auto it = idx.find(rid);
          if (it == idx.end())
            fail("UnknownResource", "player " + pl.id + " gives weights for unknown " + rid);
          pl.resource_weights[it->second] = value.get<double>();
        }
      players.push_back(std::move(pl));
    }
    return AffineInstance(std::move(resources), std::move(players));
  }
  fail("io", "unknown instance kind '" + kind + "'");
}

std::string instance_to_json(const CongestionInstance& inst) {
  json j;
  j["kind"] = "congestion";
  for (int e = 0; e < inst.resource_count(); ++e) j["resources"].push_back(inst.resource_id(e));
  for (int p = 0; p < inst.player_count(); ++p) {
    json pl;
    pl["id"] = inst.player_id(p);
    pl["weight"] = inst.weight(p);
    json processing = json::object();
    for (int i = 0; i < inst.strategy_count(p); ++i) {
      json strat = json::array();
      for (int e : inst.strategy(p, i)) {
        strat.push_back(inst.resource_id(e));
        processing[inst.resource_id(e)] = inst.processing(e, p);
      }
      pl["strategies"].push_back(strat);
    }
    pl["processing"] = processing;
    j["players"].push_back(pl);
  }
  return j.dump(2);
}

std::string instance_to_json(const AffineInstance& inst) {
  json j;
  j["kind"] = "affine";
  for (int e = 0; e < inst.resource_count(); ++e)
    j["resources"].push_back({{"id", inst.resource_id(e)}, {"a", inst.a(e)}, {"b", inst.b(e)}});
  for (int p = 0; p < inst.player_count(); ++p) {
    json pl;
    pl["id"] = inst.player_id(p);
    json weights = json::object();
    for (int i = 0; i < inst.strategy_count(p); ++i) {
      json strat = json::array();
      for (int e : inst.strategy(p, i)) {
        strat.push_back(inst.resource_id(e));
        weights[inst.resource_id(e)] = inst.resource_weight(e, p);
      }
      pl["strategies"].push_back(strat);
    }
    pl["resource_weights"] = weights;
    j["players"].push_back(pl);
  }
  return j.dump(2);
}

namespace {

template <typename Instance>
Assignment parse_assignment_json(const Instance& inst, const json& j) {
  const json& x = j.at("x");
  std::vector<std::vector<double>> probs(inst.player_count());
  std::vector<int> choice(inst.player_count(), -1);
  bool shorthand = true;
  for (int p = 0; p < inst.player_count(); ++p) {
    if (!x.contains(inst.player_id(p)))
      fail("DimensionMismatch", "assignment misses player " + inst.player_id(p));
    const json& entry = x.at(inst.player_id(p));
    if (entry.is_number_integer()) {
      choice[p] = entry.get<int>();
    } else {
      shorthand = false;
      probs[p] = entry.get<std::vector<double>>();
    }
  }
  if (shorthand) {
    std::vector<int> counts(inst.player_count());
    for (int p = 0; p < inst.player_count(); ++p) counts[p] = inst.strategy_count(p);
    return Assignment::pure(choice, counts);
  }
  for (int p = 0; p < inst.player_count(); ++p)
    if (probs[p].empty() && choice[p] >= 0) {
      probs[p].assign(inst.strategy_count(p), 0.0);
      if (choice[p] >= inst.strategy_count(p))
        fail("StrategyOutOfRange", "player " + inst.player_id(p) + " picks strategy " +
                                       std::to_string(choice[p]));
      probs[p][choice[p]] = 1.0;
    }
  Assignment a = Assignment::mixed(std::move(probs));
  check_assignment(inst, a);
  return a;
}

template <typename Instance>
json assignment_json(const Instance& inst, const Assignment& x) {
  json j;
  for (int p = 0; p < inst.player_count(); ++p) {
    if (x.is_pure())
      j["x"][inst.player_id(p)] = x.choice(p);
    else
      j["x"][inst.player_id(p)] = x.probs(p);
  }
  return j;
}

}  // namespace

template <typename Instance>
Assignment parse_assignment(const Instance& inst, const std::string& json_text) {
  return parse_assignment_json(inst, parse_json(json_text));
}

template Assignment parse_assignment<CongestionInstance>(const CongestionInstance&,
                                                         const std::string&);
template Assignment parse_assignment<AffineInstance>(const AffineInstance&, const std::string&);

std::string assignment_to_json(const CongestionInstance& inst, const Assignment& x) {
  return assignment_json(inst, x).dump(2);
}

std::string assignment_to_json(const AffineInstance& inst, const Assignment& x) {
  return assignment_json(inst, x).dump(2);
}

template <typename Instance>
ProfileDistribution parse_distribution(const Instance& inst, const std::string& json_text) {
  const json j = parse_json(json_text);
  ProfileDistribution out;
  if (!j.contains("support") || j.at("support").empty())
    fail("EmptySupport", "distribution has no support");
  for (const auto& entry : j.at("support"))
    out.support.push_back(
        {parse_assignment_json(inst, entry), entry.at("p").get<double>()});
  check_distribution(inst, out);
  return out;
}

template ProfileDistribution parse_distribution<CongestionInstance>(const CongestionInstance&,
                                                                    const std::string&);
template ProfileDistribution parse_distribution<AffineInstance>(const AffineInstance&,
                                                                const std::string&);

namespace {

template <typename Instance>
json cost_json(const Instance& inst, const CostBreakdown& c) {
  json j;
  j["social"] = c.social;
  for (int p = 0; p < inst.player_count(); ++p)
    j["perPlayer"][inst.player_id(p)] = c.per_player[p];
  return j;
}

}  // namespace

std::string cost_to_json(const CongestionInstance& inst, const CostBreakdown& c,
                         bool scheduling_fields) {
  json j = cost_json(inst, c);
  if (scheduling_fields) {
    j["eta"] = c.eta;
    for (int p = 0; p < inst.player_count(); ++p) j["D"][inst.player_id(p)] = c.delay[p];
  }
  return j.dump(2);
}

std::string cost_to_json(const AffineInstance& inst, const CostBreakdown& c) {
  return cost_json(inst, c).dump(2);
}

std::string equilibrium_report_to_json(const EquilibriumReport& rep) {
  json j;
  j["maxViolation"] = rep.max_violation;
  j["isEquilibrium"] = rep.is_equilibrium;
  if (rep.worst_player >= 0) {
    j["worstPlayer"] = rep.worst_player;
    j["worstStrategy"] = rep.worst_strategy;
  }
  return j.dump(2);
}

std::string feasibility_report_to_json(const FeasibilityReport& rep) {
  json j;
  j["scenario"] = to_string(rep.scenario);
  j["rho"] = rep.rho;
  j["dualObjective"] = rep.dual_objective;
  j["socialCost"] = rep.social_cost;
  j["ratio"] = rep.ratio;
  j["maxViolationSet1"] = rep.max_violation_set1;
  j["maxViolationSet2"] = rep.max_violation_set2;
  j["gramMinEig"] = rep.gram_min_eig;
  j["pass"] = rep.pass;
  return j.dump(2);
}

std::string certificate_to_json(const LocalOptCertificate& cert) {
  json j;
  j["kind"] = cert.kind == LocalOptCertificate::Kind::JumpOpt ? "JumpOpt" : "GammaPotential";
  j["maxViolation"] = cert.max_violation;
  if (cert.kind == LocalOptCertificate::Kind::GammaPotential) {
    j["fValues"] = cert.f_values;
    j["fSum"] = cert.f_sum;
    j["identityResidual"] = cert.identity_residual;
  }
  return j.dump(2);
}

std::string oracle_report_to_json(const CongestionInstance& inst, const OracleReport& rep) {
  json j;
  j["optValue"] = rep.opt_value;
  for (size_t p = 0; p < rep.opt_profile.size(); ++p)
    j["optProfile"][inst.player_id(static_cast<int>(p))] = rep.opt_profile[p];
  for (const auto& [profile, cost] : rep.equilibria) {
    json e;
    for (size_t p = 0; p < profile.size(); ++p)
      e["x"][inst.player_id(static_cast<int>(p))] = profile[p];
    e["cost"] = cost;
    j["equilibria"].push_back(e);
  }
  j["worstEquilibriumCost"] = rep.worst_equilibrium_cost;
  j["coordinationRatio"] = rep.coordination_ratio;
  j["priceOfAnarchy"] = rep.price_of_anarchy;
  return j.dump(2);
}

std::string cost_matrix_to_json(const CostMatrix& mat) {
  json j;
  switch (mat.kind) {
    case GameKind::SmithRule: j["kind"] = "smith"; break;
    case GameKind::Rand: j["kind"] = "rand"; break;
    case GameKind::Affine: j["kind"] = "affine"; break;
  }
  j["offsets"] = mat.offset;
  json rows = json::array();
  for (int r = 0; r < mat.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < mat.dim(); ++c) row.push_back(mat.m(r, c));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  return j.dump();
}

}  // namespace poacert
