#ifndef POACERT_DUALFIT_HPP
#define POACERT_DUALFIT_HPP

#include <string>
#include <variant>
#include <vector>

#include "poacert/equilibria.hpp"
#include "poacert/generators.hpp"
#include "poacert/model.hpp"
#include "poacert/online.hpp"
#include "poacert/sdp.hpp"

namespace poacert {

/// Every dual fitting this toolkit can construct. Each scenario fixes the
/// fitted vector family, the y values, the constraint kernel it is verified
/// against, and the guaranteed objective fraction rho of the certificate cost.
enum class Scenario {
  SmithRule4,        // NE under Smith's Rule, rho = 1/4
  PropSharing,       // NE under Proportional Sharing, rho = 2/(3+sqrt5)
  Rand2133,          // NE under Rand, rho = 15/32
  RandUniform2,      // NE under Rand, uniform Smith ratios per resource, rho = 1/2
  RandPoA2,          // NE under Rand against the Rand-kernel program, rho = 1/2
  AffineCG,          // pure NE of a weighted affine congestion game, rho = 2/(3+sqrt5)
  JumpOptFit,        // JumpOpt local optimum, objective = rho * (2C - eta)
  JumpOptRestricted, // same fitting, restricted identical machines
  ImprovedLSFit,     // gamma-potential local optimum, rho = 4/(5+sqrt5)
  GreedyFit,         // online greedy trace, rho = 1/4
  KKHighP,           // reduced two-size instance, case p >= m/(m-k)
  KKLowP,            // reduced two-size instance, case p <= m/(m-k)
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ScenarioConstants {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;  // 0 when the scenario has no gamma
  double rho = 0.0;
  /// Residuals of the defining identities (all should be <= 1e-12).
  std::vector<double> residuals;
};

/// Constants and identity residuals; KK scenarios have instance-dependent
/// alpha/beta and only carry rho = 2/(1+sqrt2).
ScenarioConstants scenario_constants(Scenario s);

struct KKCertificate {
  KKParams params;
  int small_jobs = 0;  // players [0, small_jobs) are small, the rest large
  Assignment nash;
};

using Certificate = std::variant<Assignment, GreedyRun, KKCertificate>;

struct DualSolution {
  Scenario scenario;
  std::vector<double> y;
  KernelVector v0;
  std::vector<KernelVector> v;  // flat over (j,i)
  std::vector<int> offset;      // offset[j] + i indexes v

  const KernelVector& vec(int j, int i) const { return v[offset[j] + i]; }
};

struct FeasibilityReport {
  Scenario scenario;
  double rho = 0.0;
  double dual_objective = 0.0;
  double social_cost = 0.0;
  double ratio = 0.0;  // dual_objective / social_cost
  double max_violation_set1 = 0.0;
  double max_violation_set2 = 0.0;
  double gram_min_eig = 0.0;
  double gram_trace = 0.0;
  bool pass = false;
  double y_sum = 0.0;
  /// JumpOpt scenarios: the stronger bound rho * (2C(x) - eta(x)).
  double strong_bound = 0.0;
};

/// Builds the paper-prescribed dual solution for the scenario from its
/// certificate (equilibrium assignment, local optimum, greedy trace, or
/// reduced-instance parameters).
DualSolution fit_dual(Scenario s, const CongestionInstance& inst, const Certificate& cert);
DualSolution fit_dual(const AffineInstance& inst, const Assignment& x);

/// Checks both dual constraint families on closed-form inner products, embeds
/// the vector family and certifies the Gram matrix, and compares the dual
/// objective sum(y) - ||v0||^2/2 against rho times the certificate cost.
FeasibilityReport verify_dual(Scenario s, const CongestionInstance& inst, const Certificate& cert,
                              const DualSolution& sol, double tol = 1e-8,
                              double tol_psd_factor = 1e-8);
FeasibilityReport verify_dual(const AffineInstance& inst, const Assignment& x,
                              const DualSolution& sol, double tol = 1e-8,
                              double tol_psd_factor = 1e-8);

/// Coarse-correlated extension: expected Gram and expected y over the support,
/// same constraint checks, expected objective against rho * E[C(X)].
FeasibilityReport verify_dual_cce(Scenario s, const CongestionInstance& inst,
                                  const ProfileDistribution& sigma, double tol = 1e-8,
                                  double tol_psd_factor = 1e-8);

/// The mechanism whose optimum the scenario's dual objective lower-bounds
/// (the weak-duality benchmark).
Mechanism benchmark_mechanism(Scenario s);

/// NE cost divided by dual objective must stay below this for KK scenarios.
double kk_poa_bound();

}  // namespace poacert

#endif
