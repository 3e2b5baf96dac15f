#ifndef POACERT_SDP_HPP
#define POACERT_SDP_HPP

#include <vector>

#include <Eigen/Dense>

#include "poacert/model.hpp"

namespace poacert {

/// Which quadratic objective the shared relaxation is instantiated with. The
/// kind fixes both the cost matrix entries and the second dual constraint
/// family: SmithRule uses the min{delta,delta} kernel, Rand the harmonic
/// kernel delta*delta/(delta+delta), Affine the a_e w_ej w_ek products.
enum class GameKind { SmithRule, Rand, Affine };

/// Symmetric objective matrix indexed by {0} u {(i,j)}; row/column 0 is all
/// zeros and <C, (1,x)(1,x)^T> reproduces the social cost of pure profiles.
struct CostMatrix {
  GameKind kind;
  Eigen::MatrixXd m;
  std::vector<int> offset;  // offset[j] + i indexes strategy i of player j, +1 for row 0

  int index(int j, int i) const { return 1 + offset[j] + i; }
  int dim() const { return static_cast<int>(m.rows()); }
};

CostMatrix build_cost_matrix(const CongestionInstance& inst, GameKind kind);
CostMatrix build_cost_matrix(const AffineInstance& inst);

/// <C, (1,x)(1,x)^T> for a pure assignment.
double primal_value(const CostMatrix& mat, const Assignment& x);

/// The inner-product space a fitted vector lives in. F holds per-resource
/// step functions (sums of scaled indicators 1{t <= b}) with the integral
/// inner product; G holds per-resource weights at Smith-ratio values with the
/// kernel M(r,s) = rs/(r+s); Euclidean is a plain coordinate vector.
enum class Space { F, G, Euclidean };

struct FStep {
  int resource;
  double height;
  double breakpoint;
};

struct GAtom {
  int resource;
  double weight;
  double ratio;  // > 0; zero-ratio atoms are null directions and are dropped
};

struct KernelVector {
  Space space = Space::Euclidean;
  std::vector<FStep> f;      // Space::F
  std::vector<GAtom> g;      // Space::G
  Eigen::VectorXd coords;    // Space::Euclidean

  static KernelVector step_vector(std::vector<FStep> steps);
  static KernelVector kernel_vector(std::vector<GAtom> atoms);
  static KernelVector euclidean(Eigen::VectorXd coords);
};

/// Harmonic kernel value rs/(r+s); 0 when either ratio is 0.
inline double g_kernel(double r, double s) {
  if (r == 0.0 || s == 0.0) return 0.0;
  return r * s / (r + s);
}

/// Closed-form inner product; both vectors must live in the same space.
double inner_product(const KernelVector& u, const KernelVector& v);

inline double norm_squared(const KernelVector& v) { return inner_product(v, v); }

/// Maps a family of F- or G-space elements to plain Euclidean vectors
/// preserving all pairwise inner products: F via midpoint * sqrt(segment
/// length) on the merged breakpoint grid, G via a spectral factorization of
/// the kernel matrix restricted to the ratios present.
std::vector<KernelVector> embed_euclidean(const std::vector<KernelVector>& family);

/// Largest absolute difference between closed-form inner products of `family`
/// and Euclidean dots of `embedded`, over all pairs.
double embedding_max_error(const std::vector<KernelVector>& family,
                           const std::vector<KernelVector>& embedded);

/// Smallest eigenvalue of a symmetric matrix (checked symmetric to 1e-12).
double gram_min_eigenvalue(const Eigen::MatrixXd& gram);

/// Kernel matrix of the harmonic kernel restricted to the given ratios.
Eigen::MatrixXd g_kernel_matrix(const std::vector<double>& ratios);

}  // namespace poacert

#endif
