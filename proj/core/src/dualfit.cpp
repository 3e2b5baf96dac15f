#include "poacert/dualfit.hpp"

#include <algorithm>
#include <cmath>

#include "poacert/cost.hpp"
#include "poacert/localsearch.hpp"

namespace poacert {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;

double rel_gap(double lhs, double rhs) {
  return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::SmithRule4: return "smith";
    case Scenario::PropSharing: return "ps";
    case Scenario::Rand2133: return "rand";
    case Scenario::RandUniform2: return "rand-uniform";
    case Scenario::RandPoA2: return "rand-poa";
    case Scenario::AffineCG: return "affine";
    case Scenario::JumpOptFit: return "jumpopt";
    case Scenario::JumpOptRestricted: return "jumpopt-restricted";
    case Scenario::ImprovedLSFit: return "improved-ls";
    case Scenario::GreedyFit: return "greedy";
    case Scenario::KKHighP: return "kk-high";
    case Scenario::KKLowP: return "kk-low";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& s) {
  for (Scenario sc :
       {Scenario::SmithRule4, Scenario::PropSharing, Scenario::Rand2133, Scenario::RandUniform2,
        Scenario::RandPoA2, Scenario::AffineCG, Scenario::JumpOptFit, Scenario::JumpOptRestricted,
        Scenario::ImprovedLSFit, Scenario::GreedyFit, Scenario::KKHighP, Scenario::KKLowP})
    if (to_string(sc) == s) return sc;
  fail("InvalidParams", "unknown scenario '" + s + "'");
}

double kk_poa_bound() { return (1.0 + std::sqrt(2.0)) / 2.0; }

ScenarioConstants scenario_constants(Scenario s) {
  ScenarioConstants c;
  switch (s) {
    case Scenario::SmithRule4:
    case Scenario::GreedyFit: {
      c.alpha = 1.0;
      c.beta = 0.5;
      c.rho = 0.25;
      c.residuals = {std::abs(c.beta - c.beta * c.beta - c.rho)};
      break;
    }
    case Scenario::PropSharing:
    case Scenario::AffineCG:
    case Scenario::JumpOptFit:
    case Scenario::JumpOptRestricted: {
      c.alpha = std::sqrt(2.0 / kSqrt5);
      c.beta = 1.0 / c.alpha - c.alpha / 2.0;
      c.rho = 2.0 / (3.0 + kSqrt5);
      c.residuals = {std::abs(1.0 - c.alpha * c.alpha / 2.0 - c.alpha * c.beta),
                     std::abs(c.alpha * c.beta - c.beta * c.beta / 2.0 - c.rho)};
      break;
    }
    case Scenario::Rand2133: {
      c.alpha = 1.0;
      c.beta = 0.75;
      c.rho = 15.0 / 32.0;
      c.residuals = {std::abs(1.0 - c.alpha * c.alpha / 4.0 - c.alpha * c.beta),
                     std::abs(c.alpha * c.beta - c.beta * c.beta / 2.0 - c.rho)};
      break;
    }
    case Scenario::RandUniform2:
    case Scenario::RandPoA2: {
      c.alpha = 2.0 / std::sqrt(3.0);
      c.beta = 1.0 / std::sqrt(3.0);
      c.rho = 0.5;
      c.residuals = {std::abs(1.0 - c.alpha * c.alpha / 4.0 - c.alpha * c.beta),
                     std::abs(c.alpha * c.beta - c.beta * c.beta / 2.0 - c.rho)};
      break;
    }
    case Scenario::ImprovedLSFit: {
      c.alpha = std::sqrt((kSqrt5 + 1.0) / 5.0);
      c.beta = std::sqrt((kSqrt5 - 1.0) / 5.0);
      c.gamma = (9.0 + kSqrt5) / 19.0;
      c.rho = 4.0 / (5.0 + kSqrt5);
      const double ab = c.alpha * c.beta;
      c.residuals = {std::abs(ab / c.gamma - (1.0 - c.alpha * c.alpha / 2.0)),
                     std::abs(ab * (2.0 * c.gamma - 1.0) / c.gamma - c.beta * c.beta / 2.0),
                     std::abs(2.0 * ab - c.beta * c.beta - c.rho)};
      break;
    }
    case Scenario::KKHighP:
    case Scenario::KKLowP: {
      // alpha and beta are instance-dependent here; only the target ratio is fixed.
      c.rho = 1.0 / kk_poa_bound();
      break;
    }
  }
  return c;
}

Mechanism benchmark_mechanism(Scenario s) {
  return s == Scenario::RandPoA2 ? Mechanism::Rand : Mechanism::SmithRule;
}

namespace {

Mechanism certificate_mechanism(Scenario s) {
  switch (s) {
    case Scenario::PropSharing: return Mechanism::ProportionalSharing;
    case Scenario::Rand2133:
    case Scenario::RandUniform2:
    case Scenario::RandPoA2: return Mechanism::Rand;
    default: return Mechanism::SmithRule;
  }
}

GameKind dual_kind(Scenario s) {
  if (s == Scenario::RandPoA2) return GameKind::Rand;
  if (s == Scenario::AffineCG) return GameKind::Affine;
  return GameKind::SmithRule;
}

std::vector<int> flat_offsets(const CongestionInstance& inst) {
  std::vector<int> offset(inst.player_count(), 0);
  int acc = 0;
  for (int j = 0; j < inst.player_count(); ++j) {
    offset[j] = acc;
    acc += inst.strategy_count(j);
  }
  return offset;
}

KernelVector f_v0(const CongestionInstance& inst, const Eigen::MatrixXd& z, double beta) {
  std::vector<FStep> steps;
  for (int e = 0; e < inst.resource_count(); ++e)
    for (int k = 0; k < inst.player_count(); ++k)
      if (z(e, k) > 0.0 && inst.weight(k) > 0.0)
        steps.push_back({e, beta * inst.weight(k) * z(e, k), inst.smith_ratio(e, k)});
  return KernelVector::step_vector(std::move(steps));
}

KernelVector g_v0(const CongestionInstance& inst, const Eigen::MatrixXd& z, double beta) {
  std::vector<GAtom> atoms;
  for (int e = 0; e < inst.resource_count(); ++e)
    for (int k = 0; k < inst.player_count(); ++k)
      if (z(e, k) > 0.0 && inst.weight(k) > 0.0)
        atoms.push_back({e, beta * inst.weight(k) * z(e, k), inst.smith_ratio(e, k)});
  return KernelVector::kernel_vector(std::move(atoms));
}

void fill_strategy_vectors(const CongestionInstance& inst, double alpha, Space space,
                           DualSolution* sol) {
  sol->offset = flat_offsets(inst);
  sol->v.clear();
  sol->v.reserve(inst.total_strategies());
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      if (space == Space::F) {
        std::vector<FStep> steps;
        for (int e : inst.strategy(j, i))
          steps.push_back({e, alpha * inst.weight(j), inst.smith_ratio(e, j)});
        sol->v.push_back(KernelVector::step_vector(std::move(steps)));
      } else {
        std::vector<GAtom> atoms;
        for (int e : inst.strategy(j, i))
          atoms.push_back({e, alpha * inst.weight(j), inst.smith_ratio(e, j)});
        sol->v.push_back(KernelVector::kernel_vector(std::move(atoms)));
      }
    }
}

const Assignment& expect_assignment(const Certificate& cert, Scenario s) {
  const Assignment* x = std::get_if<Assignment>(&cert);
  if (!x)
    fail("CertificateMismatch",
         "scenario " + to_string(s) + " expects an assignment certificate");
  return *x;
}

void require_uniform_ratios(const CongestionInstance& inst) {
  for (int e = 0; e < inst.resource_count(); ++e) {
    double ref = -1.0;
    for (int j = 0; j < inst.player_count(); ++j) {
      if (inst.weight(j) <= 0.0) continue;
      bool uses = false;
      for (int i = 0; i < inst.strategy_count(j) && !uses; ++i)
        for (int r : inst.strategy(j, i)) uses = uses || r == e;
      if (!uses) continue;
      const double d = inst.smith_ratio(e, j);
      if (ref < 0.0)
        ref = d;
      else if (std::abs(d - ref) > 1e-12 * std::max(1.0, ref))
        fail("CertificateMismatch", "Smith ratios are not uniform on resource " +
                                        inst.resource_id(e));
    }
  }
}

void require_restricted_identical(const CongestionInstance& inst) {
  if (!inst.is_scheduling())
    fail("CertificateMismatch", "restricted scenario needs a scheduling instance");
  for (int j = 0; j < inst.player_count(); ++j) {
    double ref = -1.0;
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const double p = inst.processing(inst.strategy(j, i)[0], j);
      if (ref < 0.0)
        ref = p;
      else if (std::abs(p - ref) > 1e-12 * std::max(1.0, ref))
        fail("CertificateMismatch",
             "job " + inst.player_id(j) + " has machine-dependent processing times");
    }
  }
}

DualSolution fit_kk(Scenario s, const CongestionInstance& inst, const KKCertificate& cert) {
  const int m = cert.params.machines;
  const double p = cert.params.large_size;
  const double eps = cert.params.small_size;
  const double alpha = static_cast<double>(m) / (m - cert.params.large_jobs);
  const bool high = s == Scenario::KKHighP;
  if (high && p < alpha)
    fail("CertificateMismatch", "kk-high requires p >= m/(m-k)");
  if (!high && p > alpha)
    fail("CertificateMismatch", "kk-low requires p <= m/(m-k)");
  if (inst.resource_count() != m || !inst.is_scheduling())
    fail("CertificateMismatch", "instance does not match the kk parameters");

  const double beta = (m + p * cert.params.large_jobs) / m;
  DualSolution sol;
  sol.scenario = s;
  sol.offset = flat_offsets(inst);
  sol.v0 = KernelVector::euclidean(Eigen::VectorXd::Constant(m, high ? alpha : beta));
  sol.y.assign(inst.player_count(), 0.0);
  for (int j = 0; j < inst.player_count(); ++j) {
    const bool large = j >= cert.small_jobs;
    if (high)
      sol.y[j] = large ? p * p + alpha * alpha / 2.0 : eps * alpha;
    else
      sol.y[j] = large ? p * p / 2.0 + beta * p : eps * beta;
    const double coeff = large ? (high ? alpha : p) : eps;
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
      c(inst.strategy(j, i)[0]) = coeff;
      sol.v.push_back(KernelVector::euclidean(std::move(c)));
    }
  }
  return sol;
}

}  // namespace

DualSolution fit_dual(Scenario s, const CongestionInstance& inst, const Certificate& cert) {
  const ScenarioConstants c = scenario_constants(s);
  DualSolution sol;
  sol.scenario = s;

  switch (s) {
    case Scenario::SmithRule4:
    case Scenario::PropSharing: {
      const Assignment& x = expect_assignment(cert, s);
      check_assignment(inst, x);
      const Eigen::MatrixXd z = usage_marginals(inst, x);
      const CostBreakdown cost = social_cost(inst, x, certificate_mechanism(s));
      sol.v0 = f_v0(inst, z, c.beta);
      fill_strategy_vectors(inst, c.alpha, Space::F, &sol);
      sol.y.resize(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j)
        sol.y[j] = c.alpha * c.beta * cost.weighted[j];
      return sol;
    }
    case Scenario::Rand2133:
    case Scenario::RandUniform2:
    case Scenario::RandPoA2: {
      const Assignment& x = expect_assignment(cert, s);
      check_assignment(inst, x);
      if (s == Scenario::RandUniform2) require_uniform_ratios(inst);
      const Eigen::MatrixXd z = usage_marginals(inst, x);
      const CostBreakdown cost = social_cost(inst, x, Mechanism::Rand);
      sol.v0 = g_v0(inst, z, c.beta);
      fill_strategy_vectors(inst, c.alpha, Space::G, &sol);
      sol.y.resize(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j)
        sol.y[j] = c.alpha * c.beta * cost.weighted[j];
      return sol;
    }
    case Scenario::JumpOptFit:
    case Scenario::JumpOptRestricted: {
      const Assignment& x = expect_assignment(cert, s);
      check_assignment(inst, x);
      if (!inst.is_scheduling() || !x.is_pure())
        fail("CertificateMismatch", "JumpOpt fittings require a pure scheduling profile");
      if (s == Scenario::JumpOptRestricted) require_restricted_identical(inst);
      const Eigen::MatrixXd z = usage_marginals(inst, x);
      const CostBreakdown cost = social_cost(inst, x, Mechanism::SmithRule);
      sol.v0 = f_v0(inst, z, c.beta);
      fill_strategy_vectors(inst, c.alpha, Space::F, &sol);
      sol.y.resize(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j)
        sol.y[j] = c.alpha * c.beta * (cost.weighted[j] + cost.delay[j]);
      return sol;
    }
    case Scenario::ImprovedLSFit: {
      const Assignment& x = expect_assignment(cert, s);
      check_assignment(inst, x);
      if (!inst.is_scheduling() || !x.is_pure())
        fail("CertificateMismatch", "the potential fitting requires a pure scheduling profile");
      const Eigen::MatrixXd z = usage_marginals(inst, x);
      std::vector<int> choice(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j) choice[j] = x.choice(j);
      sol.v0 = f_v0(inst, z, c.beta);
      fill_strategy_vectors(inst, c.alpha, Space::F, &sol);
      sol.y.resize(inst.player_count());
      for (int j = 0; j < inst.player_count(); ++j)
        sol.y[j] = c.alpha * c.beta / c.gamma * job_potential(inst, choice, j);
      return sol;
    }
    case Scenario::GreedyFit: {
      const GreedyRun* run = std::get_if<GreedyRun>(&cert);
      if (!run) fail("CertificateMismatch", "greedy fitting expects an online trace");
      check_assignment(inst, run->x);
      const Eigen::MatrixXd z = usage_marginals(inst, run->x);
      sol.v0 = f_v0(inst, z, c.beta);
      fill_strategy_vectors(inst, c.alpha, Space::F, &sol);
      sol.y.assign(inst.player_count(), 0.0);
      for (size_t t = 0; t < run->order.size(); ++t)
        sol.y[run->order[t]] = c.beta * run->step_increase[t];
      return sol;
    }
    case Scenario::KKHighP:
    case Scenario::KKLowP: {
      const KKCertificate* kk = std::get_if<KKCertificate>(&cert);
      if (!kk) fail("CertificateMismatch", "kk fitting expects reduced-instance parameters");
      return fit_kk(s, inst, *kk);
    }
    case Scenario::AffineCG:
      fail("KindMismatch", "affine fittings take an affine instance");
  }
  fail("InvalidParams", "unhandled scenario");
}

DualSolution fit_dual(const AffineInstance& inst, const Assignment& x) {
  check_assignment(inst, x);
  const ScenarioConstants c = scenario_constants(Scenario::AffineCG);
  const std::vector<double> load = affine_loads(inst, x);
  const CostBreakdown cost = affine_cost(inst, x);

  DualSolution sol;
  sol.scenario = Scenario::AffineCG;
  const int m = inst.resource_count();
  Eigen::VectorXd v0(m);
  for (int e = 0; e < m; ++e) v0(e) = c.beta * std::sqrt(inst.a(e)) * load[e];
  sol.v0 = KernelVector::euclidean(std::move(v0));

  std::vector<int> offset(inst.player_count(), 0);
  int acc = 0;
  for (int j = 0; j < inst.player_count(); ++j) {
    offset[j] = acc;
    acc += inst.strategy_count(j);
  }
  sol.offset = offset;
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
      for (int e : inst.strategy(j, i))
        v(e) = c.alpha * std::sqrt(inst.a(e)) * inst.resource_weight(e, j);
      sol.v.push_back(KernelVector::euclidean(std::move(v)));
    }
  sol.y.resize(inst.player_count());
  for (int j = 0; j < inst.player_count(); ++j)
    sol.y[j] = c.alpha * c.beta * cost.per_player[j];
  return sol;
}

namespace {

/// 2 * C_{ij,i'k} for the scenario's constraint kernel, summed over shared resources.
double pair_bound(const CongestionInstance& inst, GameKind kind, int j, const std::vector<int>& si,
                  int k, const std::vector<int>& sk) {
  double sum = 0.0;
  auto a = si.begin();
  auto b = sk.begin();
  while (a != si.end() && b != sk.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else {
      const int e = *a;
      const double dj = inst.smith_ratio(e, j), dk = inst.smith_ratio(e, k);
      if (kind == GameKind::SmithRule)
        sum += inst.weight(j) * inst.weight(k) * std::min(dj, dk);
      else
        sum += 2.0 * inst.weight(j) * inst.weight(k) * g_kernel(dj, dk);
      ++a;
      ++b;
    }
  }
  return sum;
}

bool strategies_overlap(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

struct GramStats {
  double min_eig = 0.0;
  double trace = 0.0;
};

GramStats gram_check(const std::vector<KernelVector>& family) {
  const std::vector<KernelVector> embedded = embed_euclidean(family);
  const int n = static_cast<int>(embedded.size());
  const int d = n > 0 ? static_cast<int>(embedded.front().coords.size()) : 0;
  GramStats out;
  for (const auto& v : embedded) out.trace += v.coords.squaredNorm();
  if (n == 0) return out;
  if (n <= 1200 || d >= n) {
    Eigen::MatrixXd gram(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        gram(a, b) = embedded[a].coords.dot(embedded[b].coords);
        gram(b, a) = gram(a, b);
      }
    out.min_eig = gram_min_eigenvalue(gram);
  } else {
    // Gram = V^T V shares its nonzero spectrum with the small d x d matrix
    // V V^T and has n - d exact zero eigenvalues.
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(d, d);
    for (const auto& v : embedded) outer.noalias() += v.coords * v.coords.transpose();
    out.min_eig = std::min(0.0, gram_min_eigenvalue(outer));
  }
  return out;
}

FeasibilityReport assemble_report(Scenario s, double social, double rho, double set1, double set2,
                                  const GramStats& gram, double y_sum, double v0_norm2, double tol,
                                  double tol_psd_factor) {
  FeasibilityReport rep;
  rep.scenario = s;
  rep.rho = rho;
  rep.social_cost = social;
  rep.max_violation_set1 = std::max(0.0, set1);
  rep.max_violation_set2 = std::max(0.0, set2);
  rep.gram_min_eig = gram.min_eig;
  rep.gram_trace = gram.trace;
  rep.y_sum = y_sum;
  rep.dual_objective = y_sum - 0.5 * v0_norm2;
  rep.ratio = social > 0.0 ? rep.dual_objective / social : 0.0;

  bool objective_ok;
  if (s == Scenario::KKHighP || s == Scenario::KKLowP)
    // criterion: NE cost / dual objective <= (1+sqrt2)/2 with slack for finite eps
    objective_ok = social <= (kk_poa_bound() + 1e-3) * rep.dual_objective;
  else
    objective_ok = rep.dual_objective >= rho * social - tol * std::max(1.0, social);
  rep.pass = rep.max_violation_set1 <= tol && rep.max_violation_set2 <= tol &&
             rep.gram_min_eig >= -tol_psd_factor * std::max(gram.trace, 1e-300) && objective_ok;
  return rep;
}

}  // namespace

FeasibilityReport verify_dual(Scenario s, const CongestionInstance& inst, const Certificate& cert,
                              const DualSolution& sol, double tol, double tol_psd_factor) {
  if (s == Scenario::AffineCG) fail("KindMismatch", "affine verification takes an affine instance");
  if (sol.y.size() != static_cast<size_t>(inst.player_count()) ||
      sol.v.size() != static_cast<size_t>(inst.total_strategies()))
    fail("DimensionMismatch", "dual solution does not index this instance");

  const GameKind kind = dual_kind(s);
  const ScenarioConstants c = scenario_constants(s);

  // cost notion of the certificate
  double social = 0.0;
  double eta = 0.0;
  if (const auto* kk = std::get_if<KKCertificate>(&cert)) {
    social = social_cost(inst, kk->nash, Mechanism::SmithRule).social;
  } else if (const auto* run = std::get_if<GreedyRun>(&cert)) {
    social = social_cost(inst, run->x, Mechanism::SmithRule).social;
  } else {
    const CostBreakdown cb = social_cost(inst, std::get<Assignment>(cert),
                                         certificate_mechanism(s));
    social = cb.social;
    eta = cb.eta;
  }

  // first constraint family: y_j <= C_{ij,ij} - ||v_ij||^2 / 2 + <v0, v_ij>
  double set1 = 0.0;
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      double diag = 0.0;
      for (int e : inst.strategy(j, i)) diag += inst.weight(j) * inst.processing(e, j);
      const KernelVector& vij = sol.vec(j, i);
      const double rhs = diag - 0.5 * norm_squared(vij) + inner_product(sol.v0, vij);
      set1 = std::max(set1, rel_gap(sol.y[j], rhs));
    }

  // second constraint family over pairs with overlapping strategies; disjoint
  // supports have inner product zero against a nonnegative bound
  double set2 = 0.0;
  if (inst.is_scheduling()) {
    std::vector<std::vector<std::pair<int, int>>> bucket(inst.resource_count());
    for (int j = 0; j < inst.player_count(); ++j)
      for (int i = 0; i < inst.strategy_count(j); ++i)
        bucket[inst.strategy(j, i)[0]].push_back({j, i});
    for (const auto& list : bucket)
      for (size_t a = 0; a < list.size(); ++a)
        for (size_t b = a + 1; b < list.size(); ++b) {
          const auto [j, i] = list[a];
          const auto [k, i2] = list[b];
          const double lhs = inner_product(sol.vec(j, i), sol.vec(k, i2));
          const double rhs =
              pair_bound(inst, kind, j, inst.strategy(j, i), k, inst.strategy(k, i2));
          set2 = std::max(set2, rel_gap(lhs, rhs));
        }
  } else {
    for (int j = 0; j < inst.player_count(); ++j)
      for (int i = 0; i < inst.strategy_count(j); ++i)
        for (int k = j; k < inst.player_count(); ++k)
          for (int i2 = (k == j ? i + 1 : 0); i2 < inst.strategy_count(k); ++i2) {
            if (!strategies_overlap(inst.strategy(j, i), inst.strategy(k, i2))) continue;
            const double lhs = inner_product(sol.vec(j, i), sol.vec(k, i2));
            const double rhs =
                pair_bound(inst, kind, j, inst.strategy(j, i), k, inst.strategy(k, i2));
            set2 = std::max(set2, rel_gap(lhs, rhs));
          }
  }

  std::vector<KernelVector> family;
  family.reserve(sol.v.size() + 1);
  family.push_back(sol.v0);
  for (const auto& v : sol.v) family.push_back(v);
  const GramStats gram = gram_check(family);

  double y_sum = 0.0;
  for (double y : sol.y) y_sum += y;
  FeasibilityReport rep = assemble_report(s, social, c.rho, set1, set2, gram, y_sum,
                                          norm_squared(sol.v0), tol, tol_psd_factor);
  if (s == Scenario::JumpOptFit || s == Scenario::JumpOptRestricted)
    rep.strong_bound = c.rho * (2.0 * social - eta);
  return rep;
}

FeasibilityReport verify_dual(const AffineInstance& inst, const Assignment& x,
                              const DualSolution& sol, double tol, double tol_psd_factor) {
  if (sol.scenario != Scenario::AffineCG)
    fail("KindMismatch", "affine instances verify the affine scenario");
  const ScenarioConstants c = scenario_constants(Scenario::AffineCG);
  const double social = affine_cost(inst, x).social;

  double set1 = 0.0;
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      double diag = 0.0;
      for (int e : inst.strategy(j, i))
        diag += inst.resource_weight(e, j) * (inst.a(e) * inst.resource_weight(e, j) + inst.b(e));
      const KernelVector& vij = sol.vec(j, i);
      const double rhs = diag - 0.5 * norm_squared(vij) + inner_product(sol.v0, vij);
      set1 = std::max(set1, rel_gap(sol.y[j], rhs));
    }

  double set2 = 0.0;
  for (int j = 0; j < inst.player_count(); ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i)
      for (int k = j; k < inst.player_count(); ++k)
        for (int i2 = (k == j ? i + 1 : 0); i2 < inst.strategy_count(k); ++i2) {
          if (!strategies_overlap(inst.strategy(j, i), inst.strategy(k, i2))) continue;
          double bound = 0.0;
          auto a = inst.strategy(j, i).begin();
          auto b = inst.strategy(k, i2).begin();
          const auto& si = inst.strategy(j, i);
          const auto& sk = inst.strategy(k, i2);
          while (a != si.end() && b != sk.end()) {
            if (*a < *b) ++a;
            else if (*b < *a) ++b;
            else {
              bound += 2.0 * inst.a(*a) * inst.resource_weight(*a, j) *
                       inst.resource_weight(*a, k);
              ++a; ++b;
            }
          }
          const double lhs = inner_product(sol.vec(j, i), sol.vec(k, i2));
          set2 = std::max(set2, rel_gap(lhs, bound));
        }

  std::vector<KernelVector> family;
  family.push_back(sol.v0);
  for (const auto& v : sol.v) family.push_back(v);
  const GramStats gram = gram_check(family);

  double y_sum = 0.0;
  for (double y : sol.y) y_sum += y;
  return assemble_report(Scenario::AffineCG, social, c.rho, set1, set2, gram, y_sum,
                         norm_squared(sol.v0), tol, tol_psd_factor);
}

FeasibilityReport verify_dual_cce(Scenario s, const CongestionInstance& inst,
                                  const ProfileDistribution& sigma, double tol,
                                  double tol_psd_factor) {
  switch (s) {
    case Scenario::SmithRule4:
    case Scenario::PropSharing:
    case Scenario::Rand2133:
    case Scenario::RandUniform2:
    case Scenario::RandPoA2: break;
    default:
      fail("CertificateMismatch",
           "coarse-correlated verification covers the equilibrium scenarios only");
  }
  const Mechanism mech = certificate_mechanism(s);
  const EquilibriumReport eq = check_cce(inst, sigma, mech, tol);
  if (!eq.is_equilibrium)
    fail("NotAnEquilibrium", "distribution violates the CCE conditions by " +
                                 std::to_string(eq.max_violation));

  const ScenarioConstants c = scenario_constants(s);
  const GameKind kind = dual_kind(s);
  const int n = inst.player_count();
  const int total = inst.total_strategies();
  const std::vector<int> offset = flat_offsets(inst);

  // v_ij are deterministic; v0 and y vary with the realization.
  std::vector<double> phi(n, 0.0);
  double expected_cost = 0.0;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(total + 1, total + 1);
  std::vector<KernelVector> vs;
  bool have_vs = false;
  for (const auto& [x, p] : sigma.support) {
    if (p == 0.0) continue;
    const DualSolution sol = fit_dual(s, inst, Certificate(x));
    if (!have_vs) {
      vs = sol.v;
      have_vs = true;
    }
    expected_cost += p * social_cost(inst, x, mech).social;
    for (int j = 0; j < n; ++j) phi[j] += p * sol.y[j];
    gram(0, 0) += p * norm_squared(sol.v0);
    for (int a = 0; a < total; ++a) {
      const double ip = inner_product(sol.v0, sol.v[a]);
      gram(0, a + 1) += p * ip;
      gram(a + 1, 0) += p * ip;
    }
  }
  for (int a = 0; a < total; ++a)
    for (int b = a; b < total; ++b) {
      const double ip = inner_product(vs[a], vs[b]);
      gram(a + 1, b + 1) = ip;
      gram(b + 1, a + 1) = ip;
    }

  double set1 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i) {
      const int a = offset[j] + i;
      double diag = 0.0;
      for (int e : inst.strategy(j, i)) diag += inst.weight(j) * inst.processing(e, j);
      const double rhs = diag - 0.5 * gram(a + 1, a + 1) + gram(0, a + 1);
      set1 = std::max(set1, rel_gap(phi[j], rhs));
    }

  double set2 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < inst.strategy_count(j); ++i)
      for (int k = j; k < n; ++k)
        for (int i2 = (k == j ? i + 1 : 0); i2 < inst.strategy_count(k); ++i2) {
          if (!strategies_overlap(inst.strategy(j, i), inst.strategy(k, i2))) continue;
          const double lhs = gram(offset[j] + i + 1, offset[k] + i2 + 1);
          const double rhs = pair_bound(inst, kind, j, inst.strategy(j, i), k,
                                        inst.strategy(k, i2));
          set2 = std::max(set2, rel_gap(lhs, rhs));
        }

  GramStats stats;
  stats.trace = gram.trace();
  stats.min_eig = gram_min_eigenvalue(gram);
  double y_sum = 0.0;
  for (double v : phi) y_sum += v;
  return assemble_report(s, expected_cost, c.rho, set1, set2, stats, y_sum, gram(0, 0), tol,
                         tol_psd_factor);
}

}  // namespace poacert
