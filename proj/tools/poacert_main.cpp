// Command-line surface for the congestion-game toolkit: cost evaluation,
// equilibrium checks, dynamics, local search, online greedy, dual-fitting
// verification, the brute-force oracle, instance generators, and the full
// verification suite. Exit codes: 0 = pass, 1 = usage/IO error, 2 = certified
// verification failure.

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poacert/cost.hpp"
#include "poacert/dualfit.hpp"
#include "poacert/equilibria.hpp"
#include "poacert/generators.hpp"
#include "poacert/io.hpp"
#include "poacert/localsearch.hpp"
#include "poacert/online.hpp"
#include "poacert/oracle.hpp"
#include "poacert/suite.hpp"

namespace {

using namespace poacert;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertifiedFailure = 2;

struct Options {
  std::string instance_path;
  std::string assignment_path;
  std::string distribution_path;
  std::string mechanism = "smith";
  std::string scenario;
  std::string order;
  std::string family;
  std::string out_prefix = "out";
  bool json_output = false;
  bool all_orders = false;
  double tol = 1e-8;
  double tol_psd = 1e-8;
  double eq_tol = 1e-9;
  double eps_rel = 1e-9;
  int max_iters = 100000;
  std::uint64_t seed = 42;
  std::uint64_t cap = 2'000'000;
  int n = 3;
  int kk_m = 2, kk_k = 1;
  double kk_p = 2.0, kk_eps = 0.01;
  int players = 3, resources = 3, max_strategies = 3, max_strategy_size = 2;
  std::string random_kind = "congestion";
  std::string policy = "roundrobin";
  bool emit_cost_matrix = false;
};

AnyInstance load_instance(const Options& opt) {
  if (opt.instance_path.empty()) fail("io", "--instance is required");
  return parse_instance(read_file(opt.instance_path));
}

const CongestionInstance& congestion_or_fail(const AnyInstance& inst) {
  const auto* c = std::get_if<CongestionInstance>(&inst);
  if (!c) fail("KindMismatch", "this command needs a congestion instance");
  return *c;
}

void emit(const Options& opt, const std::string& json_text, const std::string& text) {
  std::cout << (opt.json_output ? json_text : text) << "\n";
}

int cmd_eval(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  if (!opt.emit_cost_matrix && opt.assignment_path.empty())
    fail("io", "--assignment is required unless --cost-matrix is given");
  if (const auto* aff = std::get_if<AffineInstance>(&any)) {
    if (opt.emit_cost_matrix) {
      std::cout << cost_matrix_to_json(build_cost_matrix(*aff)) << "\n";
      return kExitPass;
    }
    const Assignment x = parse_assignment(*aff, read_file(opt.assignment_path));
    const CostBreakdown c = affine_cost(*aff, x);
    emit(opt, cost_to_json(*aff, c), "social cost: " + format_number(c.social));
    return kExitPass;
  }
  const CongestionInstance& inst = std::get<CongestionInstance>(any);
  if (opt.emit_cost_matrix) {
    const GameKind kind = mechanism_from_string(opt.mechanism) == Mechanism::Rand
                              ? GameKind::Rand
                              : GameKind::SmithRule;
    std::cout << cost_matrix_to_json(build_cost_matrix(inst, kind)) << "\n";
    return kExitPass;
  }
  const Assignment x = parse_assignment(inst, read_file(opt.assignment_path));
  const CostBreakdown c = social_cost(inst, x, mechanism_from_string(opt.mechanism));
  emit(opt, cost_to_json(inst, c, inst.is_scheduling()),
       "social cost: " + format_number(c.social) + "  (eta " + format_number(c.eta) + ")");
  return kExitPass;
}

int cmd_check_ne(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  EquilibriumReport rep;
  if (!opt.distribution_path.empty()) {
    const CongestionInstance& inst = congestion_or_fail(any);
    const ProfileDistribution sigma = parse_distribution(inst, read_file(opt.distribution_path));
    rep = check_cce(inst, sigma, mechanism_from_string(opt.mechanism), opt.eq_tol);
  } else if (const auto* aff = std::get_if<AffineInstance>(&any)) {
    rep = check_equilibrium(*aff, parse_assignment(*aff, read_file(opt.assignment_path)),
                            opt.eq_tol);
  } else {
    const CongestionInstance& inst = std::get<CongestionInstance>(any);
    rep = check_equilibrium(inst, parse_assignment(inst, read_file(opt.assignment_path)),
                            mechanism_from_string(opt.mechanism), opt.eq_tol);
  }
  emit(opt, equilibrium_report_to_json(rep),
       std::string(rep.is_equilibrium ? "equilibrium" : "NOT an equilibrium") +
           ", max violation " + format_number(rep.max_violation));
  return rep.is_equilibrium ? kExitPass : kExitCertifiedFailure;
}

int cmd_br(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  const CongestionInstance& inst = congestion_or_fail(any);
  Assignment init = opt.assignment_path.empty()
                        ? Assignment::pure_for(inst, std::vector<int>(inst.player_count(), 0))
                        : parse_assignment(inst, read_file(opt.assignment_path));
  const SweepPolicy policy =
      opt.policy == "random" ? SweepPolicy::SeededRandom : SweepPolicy::RoundRobin;
  const DynamicsResult res = best_response_dynamics(
      inst, mechanism_from_string(opt.mechanism), init, opt.max_iters, policy, opt.seed,
      opt.eq_tol);
  json j;
  j["converged"] = res.converged;
  j["moves"] = res.moves;
  j["assignment"] = json::parse(assignment_to_json(inst, res.x));
  emit(opt, j.dump(2),
       std::string(res.converged ? "converged" : "hit the iteration cap") + " after " +
           std::to_string(res.moves) + " moves\n" + assignment_to_json(inst, res.x));
  return kExitPass;
}

Assignment default_init(const CongestionInstance& inst, const Options& opt) {
  if (!opt.assignment_path.empty())
    return parse_assignment(inst, read_file(opt.assignment_path));
  std::vector<int> order(inst.player_count());
  std::iota(order.begin(), order.end(), 0);
  return greedy_online(inst, order).x;
}

int cmd_jumpopt(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  const CongestionInstance& inst = congestion_or_fail(any);
  const SearchResult res = jump_opt(inst, default_init(inst, opt), opt.max_iters);
  const LocalOptCertificate cert = check_jumpopt(inst, res.x);
  json j;
  j["converged"] = res.converged;
  j["moves"] = res.moves;
  j["certificate"] = json::parse(certificate_to_json(cert));
  j["assignment"] = json::parse(assignment_to_json(inst, res.x));
  j["socialCost"] = social_cost(inst, res.x, Mechanism::SmithRule).social;
  emit(opt, j.dump(2),
       std::string(res.converged ? "converged" : "cap reached") + " after " +
           std::to_string(res.moves) + " moves, certificate violation " +
           format_number(cert.max_violation));
  return kExitPass;
}

int cmd_localsearch(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  const CongestionInstance& inst = congestion_or_fail(any);
  const SearchResult res = improved_local_search(inst, default_init(inst, opt), opt.eps_rel,
                                                 opt.max_iters);
  const LocalOptCertificate cert = check_gamma_potential(inst, res.x);
  json j;
  j["converged"] = res.converged;
  j["moves"] = res.moves;
  j["certificate"] = json::parse(certificate_to_json(cert));
  j["assignment"] = json::parse(assignment_to_json(inst, res.x));
  j["socialCost"] = social_cost(inst, res.x, Mechanism::SmithRule).social;
  emit(opt, j.dump(2),
       std::string(res.converged ? "converged" : "cap reached") + " after " +
           std::to_string(res.moves) + " moves, certificate violation " +
           format_number(cert.max_violation));
  return kExitPass;
}

std::vector<int> parse_order(const CongestionInstance& inst, const std::string& csv) {
  std::map<std::string, int> index;
  for (int j = 0; j < inst.player_count(); ++j) index[inst.player_id(j)] = j;
  std::vector<int> order;
  std::string token;
  for (char ch : csv + ",") {
    if (ch == ',') {
      if (token.empty()) continue;
      auto it = index.find(token);
      if (it == index.end()) fail("InvalidParams", "unknown player id '" + token + "'");
      order.push_back(it->second);
      token.clear();
    } else {
      token += ch;
    }
  }
  return order;
}

int cmd_greedy(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  const CongestionInstance& inst = congestion_or_fail(any);
  if (opt.all_orders) {
    if (inst.player_count() > 7)
      fail("SearchSpaceTooLarge", "--all-orders enumerates permutations for <= 7 players");
    const double opt_sr = brute_force_opt(inst, Mechanism::SmithRule, opt.cap).value;
    std::vector<int> order(inst.player_count());
    std::iota(order.begin(), order.end(), 0);
    double worst_cost = 0.0;
    std::vector<int> worst_order = order;
    do {
      const GreedyRun run = greedy_online(inst, order);
      const double cost = run.cumulative.back();
      if (cost > worst_cost) {
        worst_cost = cost;
        worst_order = order;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    json j;
    j["worstCost"] = worst_cost;
    j["optSmith"] = opt_sr;
    j["worstRatio"] = opt_sr > 0 ? worst_cost / opt_sr : 0.0;
    for (int p : worst_order) j["worstOrder"].push_back(inst.player_id(p));
    emit(opt, j.dump(2),
         "worst greedy cost " + format_number(worst_cost) + " over all orders, OPT " +
             format_number(opt_sr) + ", ratio " +
             format_number(opt_sr > 0 ? worst_cost / opt_sr : 0.0));
    return kExitPass;
  }

  std::vector<int> order(inst.player_count());
  std::iota(order.begin(), order.end(), 0);
  if (!opt.order.empty()) order = parse_order(inst, opt.order);
  const GreedyRun run = greedy_online(inst, order);
  json j;
  j["cost"] = run.cumulative.back();
  j["steps"] = run.step_increase;
  j["assignment"] = json::parse(assignment_to_json(inst, run.x));
  emit(opt, j.dump(2), "greedy cost " + format_number(run.cumulative.back()));
  return kExitPass;
}

int cmd_verify_dual(const Options& opt) {
  if (opt.scenario.empty()) fail("InvalidParams", "--scenario is required");
  const Scenario s = scenario_from_string(opt.scenario);

  FeasibilityReport rep;
  if (s == Scenario::KKHighP || s == Scenario::KKLowP) {
    const KKInstance kk = gen_kk({opt.kk_m, opt.kk_k, opt.kk_p, opt.kk_eps});
    const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
    const DualSolution sol = fit_dual(s, kk.instance, Certificate(cert));
    rep = verify_dual(s, kk.instance, Certificate(cert), sol, opt.tol, opt.tol_psd);
  } else if (s == Scenario::AffineCG) {
    const AnyInstance any = load_instance(opt);
    const auto* aff = std::get_if<AffineInstance>(&any);
    if (!aff) fail("KindMismatch", "the affine scenario needs an affine instance");
    const Assignment x = parse_assignment(*aff, read_file(opt.assignment_path));
    rep = verify_dual(*aff, x, fit_dual(*aff, x), opt.tol, opt.tol_psd);
  } else {
    const AnyInstance any = load_instance(opt);
    const CongestionInstance& inst = congestion_or_fail(any);
    if (!opt.distribution_path.empty()) {
      const ProfileDistribution sigma =
          parse_distribution(inst, read_file(opt.distribution_path));
      rep = verify_dual_cce(s, inst, sigma, opt.tol, opt.tol_psd);
    } else if (s == Scenario::GreedyFit) {
      std::vector<int> order(inst.player_count());
      std::iota(order.begin(), order.end(), 0);
      if (!opt.order.empty()) order = parse_order(inst, opt.order);
      const GreedyRun run = greedy_online(inst, order);
      const DualSolution sol = fit_dual(s, inst, Certificate(run));
      rep = verify_dual(s, inst, Certificate(run), sol, opt.tol, opt.tol_psd);
    } else {
      const Assignment x = parse_assignment(inst, read_file(opt.assignment_path));
      const DualSolution sol = fit_dual(s, inst, Certificate(x));
      rep = verify_dual(s, inst, Certificate(x), sol, opt.tol, opt.tol_psd);
    }
  }
  emit(opt, feasibility_report_to_json(rep),
       std::string(rep.pass ? "PASS" : "FAIL") + "  dual objective " +
           format_number(rep.dual_objective) + ", social cost " +
           format_number(rep.social_cost) + ", ratio " + format_number(rep.ratio) +
           " (rho " + format_number(rep.rho) + "), violations " +
           format_number(rep.max_violation_set1) + " / " +
           format_number(rep.max_violation_set2) + ", gram min eig " +
           format_number(rep.gram_min_eig));
  return rep.pass ? kExitPass : kExitCertifiedFailure;
}

int cmd_oracle(const Options& opt) {
  const AnyInstance any = load_instance(opt);
  const CongestionInstance& inst = congestion_or_fail(any);
  const OracleReport rep = ratio_report(inst, mechanism_from_string(opt.mechanism), opt.cap);
  emit(opt, oracle_report_to_json(inst, rep),
       "OPT " + format_number(rep.opt_value) + ", " + std::to_string(rep.equilibria.size()) +
           " pure equilibria, coordination ratio " + format_number(rep.coordination_ratio) +
           ", PoA " + format_number(rep.price_of_anarchy));
  return kExitPass;
}

int cmd_gen(const Options& opt) {
  if (opt.family == "lambda") {
    const LowerBoundLS lb = gen_lower_bound_ls(opt.n);
    write_file(opt.out_prefix + "_instance.json", instance_to_json(lb.instance));
    write_file(opt.out_prefix + "_shifted.json", assignment_to_json(lb.instance, lb.shifted));
    write_file(opt.out_prefix + "_canonical.json",
               assignment_to_json(lb.instance, lb.canonical));
    std::cout << "lambda = " << format_number(lb.lambda) << ", shifted cost "
              << format_number(lb.shifted_cost) << ", canonical cost "
              << format_number(lb.canonical_cost) << "\n";
    return kExitPass;
  }
  if (opt.family == "kk") {
    const KKInstance kk = gen_kk({opt.kk_m, opt.kk_k, opt.kk_p, opt.kk_eps});
    write_file(opt.out_prefix + "_instance.json", instance_to_json(kk.instance));
    write_file(opt.out_prefix + "_ne.json", assignment_to_json(kk.instance, kk.nash));
    std::cout << "reduced instance with " << kk.small_jobs << " small jobs, optimum "
              << format_number(kk.opt_cost) << "\n";
    return kExitPass;
  }
  if (opt.family == "random") {
    RandomProfile prof;
    prof.players = opt.players;
    prof.resources = opt.resources;
    prof.max_strategies = opt.max_strategies;
    prof.max_strategy_size = opt.max_strategy_size;
    if (opt.random_kind == "scheduling") prof.kind = RandomProfile::Kind::Scheduling;
    else if (opt.random_kind == "uniform") prof.kind = RandomProfile::Kind::UniformRatio;
    else if (opt.random_kind == "restricted") prof.kind = RandomProfile::Kind::RestrictedIdentical;
    else if (opt.random_kind == "affine") {
      RandomAffineProfile aprof;
      aprof.players = opt.players;
      aprof.resources = opt.resources;
      aprof.max_strategies = opt.max_strategies;
      aprof.max_strategy_size = opt.max_strategy_size;
      write_file(opt.out_prefix + "_instance.json",
                 instance_to_json(gen_random_affine(opt.seed, aprof)));
      return kExitPass;
    } else if (opt.random_kind != "congestion")
      fail("InvalidParams", "unknown random kind '" + opt.random_kind + "'");
    write_file(opt.out_prefix + "_instance.json", instance_to_json(gen_random(opt.seed, prof)));
    return kExitPass;
  }
  fail("InvalidParams", "unknown family '" + opt.family + "' (lambda | kk | random)");
}

int cmd_suite(const Options& opt) {
  const SuiteResult res = run_acceptance(opt.seed, opt.json_output ? nullptr : &std::cout);
  if (opt.json_output) {
    json j;
    for (const auto& c : res.criteria)
      j["criteria"].push_back(
          {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["pass"] = res.all_pass;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (res.all_pass ? "suite PASS" : "suite FAIL") << "\n";
  }
  return res.all_pass ? kExitPass : kExitCertifiedFailure;
}

bool is_usage_kind(const std::string& kind) {
  return kind != "NotAnEquilibrium" && kind != "NoEquilibriumFound" && kind != "NonPSDKernel";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"congestion/scheduling game toolkit: equilibria, local search, online greedy, "
               "and SDP dual-fitting certificates"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", opt.json_output, "machine-readable output");
    sub->add_option("--tol", opt.tol, "verification tolerance");
    sub->add_option("--tol-psd", opt.tol_psd, "Gram eigenvalue tolerance factor");
    sub->add_option("--max-iters", opt.max_iters, "iteration cap");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--cap", opt.cap, "profile enumeration cap");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate costs of an assignment");
  eval->add_option("--instance", opt.instance_path)->required();
  eval->add_option("--assignment", opt.assignment_path);
  eval->add_option("--mechanism", opt.mechanism, "smith | ps | rand");
  eval->add_flag("--cost-matrix", opt.emit_cost_matrix,
                 "emit the objective matrix of the mechanism's relaxation instead");
  add_common(eval);

  CLI::App* checkne = app.add_subcommand("check-ne", "certify an equilibrium");
  checkne->add_option("--instance", opt.instance_path)->required();
  checkne->add_option("--assignment", opt.assignment_path);
  checkne->add_option("--distribution", opt.distribution_path);
  checkne->add_option("--mechanism", opt.mechanism);
  checkne->add_option("--eq-tol", opt.eq_tol, "equilibrium tolerance");
  add_common(checkne);

  CLI::App* br = app.add_subcommand("br", "best-response dynamics");
  br->add_option("--instance", opt.instance_path)->required();
  br->add_option("--init", opt.assignment_path);
  br->add_option("--mechanism", opt.mechanism);
  br->add_option("--policy", opt.policy, "roundrobin | random");
  br->add_option("--eq-tol", opt.eq_tol);
  add_common(br);

  CLI::App* jo = app.add_subcommand("jumpopt", "objective-improving job moves");
  jo->add_option("--instance", opt.instance_path)->required();
  jo->add_option("--init", opt.assignment_path);
  add_common(jo);

  CLI::App* ls = app.add_subcommand("localsearch", "potential-decreasing job moves");
  ls->add_option("--instance", opt.instance_path)->required();
  ls->add_option("--init", opt.assignment_path);
  ls->add_option("--eps-rel", opt.eps_rel, "relative improvement threshold");
  add_common(ls);

  CLI::App* greedy = app.add_subcommand("greedy", "online greedy assignment");
  greedy->add_option("--instance", opt.instance_path)->required();
  greedy->add_option("--order", opt.order, "comma-separated arrival order of player ids");
  greedy->add_flag("--all-orders", opt.all_orders, "worst ratio over all arrival orders");
  add_common(greedy);

  CLI::App* verify = app.add_subcommand("verify-dual", "fit and verify a dual solution");
  verify->add_option("--scenario", opt.scenario,
                     "smith | ps | rand | rand-uniform | rand-poa | affine | jumpopt | "
                     "jumpopt-restricted | improved-ls | greedy | kk-high | kk-low")
      ->required();
  verify->add_option("--instance", opt.instance_path);
  verify->add_option("--assignment", opt.assignment_path);
  verify->add_option("--distribution", opt.distribution_path);
  verify->add_option("--order", opt.order);
  verify->add_option("--kk-m", opt.kk_m);
  verify->add_option("--kk-k", opt.kk_k);
  verify->add_option("--kk-p", opt.kk_p);
  verify->add_option("--kk-eps", opt.kk_eps);
  add_common(verify);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force optima and equilibria");
  oracle->add_option("--instance", opt.instance_path)->required();
  oracle->add_option("--mechanism", opt.mechanism);
  add_common(oracle);

  CLI::App* gen = app.add_subcommand("gen", "write instance families to JSON");
  gen->add_option("--family", opt.family, "lambda | kk | random")->required();
  gen->add_option("--n", opt.n, "jobs in the lambda family");
  gen->add_option("--kk-m", opt.kk_m);
  gen->add_option("--kk-k", opt.kk_k);
  gen->add_option("--kk-p", opt.kk_p);
  gen->add_option("--kk-eps", opt.kk_eps);
  gen->add_option("--players", opt.players);
  gen->add_option("--resources", opt.resources);
  gen->add_option("--max-strategies", opt.max_strategies);
  gen->add_option("--max-strategy-size", opt.max_strategy_size);
  gen->add_option("--kind", opt.random_kind,
                  "congestion | scheduling | uniform | restricted | affine");
  gen->add_option("--out", opt.out_prefix, "output path prefix");
  add_common(gen);

  CLI::App* suite = app.add_subcommand("suite", "run the full verification battery");
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(opt);
    if (checkne->parsed()) return cmd_check_ne(opt);
    if (br->parsed()) return cmd_br(opt);
    if (jo->parsed()) return cmd_jumpopt(opt);
    if (ls->parsed()) return cmd_localsearch(opt);
    if (greedy->parsed()) return cmd_greedy(opt);
    if (verify->parsed()) return cmd_verify_dual(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (gen->parsed()) return cmd_gen(opt);
    if (suite->parsed()) return cmd_suite(opt);
  } catch (const Error& e) {
    if (opt.json_output) {
      nlohmann::json j;
      j["error"]["kind"] = e.kind();
      j["error"]["message"] = e.what();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
    }
    return is_usage_kind(e.kind()) ? kExitUsage : kExitCertifiedFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
