#ifndef POACERT_LOCALSEARCH_HPP
#define POACERT_LOCALSEARCH_HPP

#include <vector>

#include "poacert/model.hpp"

namespace poacert {

struct LocalOptCertificate {
  enum class Kind { JumpOpt, GammaPotential };
  Kind kind = Kind::JumpOpt;
  /// Max relative violation of the defining inequality family over all (j,i).
  double max_violation = 0.0;
  /// Per-player potentials f_j(x) (GammaPotential only).
  std::vector<double> f_values;
  double f_sum = 0.0;
  /// Relative residual of sum_j f_j = 2*gamma*C - (2*gamma-1)*eta.
  double identity_residual = 0.0;
};

struct SearchResult {
  Assignment x;
  bool converged = false;
  int moves = 0;
};

/// Moves single jobs between machines while the move strictly decreases the
/// global objective under Smith's Rule. Requires a scheduling instance and a
/// pure start.
SearchResult jump_opt(const CongestionInstance& inst, const Assignment& init, int max_iters,
                      double tol_rel = 1e-12);

/// Checks the JumpOpt local-optimality inequalities
///   w_j C_j(x) + D_j(x) <= w_j p_ij + sum_{k != j} w_j w_k min{d_ij, d_ik} x_ik.
LocalOptCertificate check_jumpopt(const CongestionInstance& inst, const Assignment& x);

/// Potential of job j at its current machine under the gamma-potential search.
double job_potential(const CongestionInstance& inst, const std::vector<int>& choice, int j);

/// Moves the job whose relocation gives the largest decrease of its own
/// potential f_j (threshold eps_rel * f_j; ties broken by lowest job then
/// machine index) until no improving move remains or the cap is hit.
SearchResult improved_local_search(const CongestionInstance& inst, const Assignment& init,
                                   double eps_rel, int max_iters);

/// Checks f_j(x) <= w_j p_ij + gamma sum_{k != j} w_j w_k min{d_ij, d_ik} x_ik
/// for all (j,i), reports all f_j and the identity residual.
LocalOptCertificate check_gamma_potential(const CongestionInstance& inst, const Assignment& x);

}  // namespace poacert

#endif
