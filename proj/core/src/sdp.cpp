#include "poacert/sdp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace poacert {

namespace {

std::vector<int> strategy_offsets(int players, const std::vector<int>& counts, int* total) {
  std::vector<int> offset(players, 0);
  int acc = 0;
  for (int j = 0; j < players; ++j) {
    offset[j] = acc;
    acc += counts[j];
  }
  *total = acc;
  return offset;
}

double overlap_entry(const CongestionInstance& inst, GameKind kind, int j, const std::vector<int>& si,
                     int k, const std::vector<int>& sk) {
  // sum over shared resources of the pairwise kernel term
  double sum = 0.0;
  auto a = si.begin();
  auto b = sk.begin();
  while (a != si.end() && b != sk.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      const int e = *a;
      const double dj = inst.smith_ratio(e, j), dk = inst.smith_ratio(e, k);
      if (kind == GameKind::SmithRule)
        sum += inst.weight(j) * inst.weight(k) * std::min(dj, dk);
      else
        sum += inst.weight(j) * inst.weight(k) * g_kernel(dj, dk);
      ++a;
      ++b;
    }
  }
  return sum;
}

}  // namespace

CostMatrix build_cost_matrix(const CongestionInstance& inst, GameKind kind) {
  if (kind == GameKind::Affine)
    fail("KindMismatch", "affine cost matrices require an affine instance");
  const int n = inst.player_count();
  std::vector<int> counts(n);
  for (int j = 0; j < n; ++j) counts[j] = inst.strategy_count(j);
  int total = 0;
  CostMatrix out;
  out.kind = kind;
  out.offset = strategy_offsets(n, counts, &total);
  out.m = Eigen::MatrixXd::Zero(total + 1, total + 1);

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < counts[j]; ++i) {
      double diag = 0.0;
      for (int e : inst.strategy(j, i)) diag += inst.weight(j) * inst.processing(e, j);
      out.m(out.index(j, i), out.index(j, i)) = diag;
    }
  // Off-diagonal entries: SmithRule carries 1/2 * w_j w_k min{delta, delta},
  // Rand the full harmonic term, summed over shared resources.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < counts[j]; ++i)
      for (int k = j; k < n; ++k)
        for (int i2 = (k == j ? i + 1 : 0); i2 < counts[k]; ++i2) {
          double v = overlap_entry(inst, kind, j, inst.strategy(j, i), k, inst.strategy(k, i2));
          if (kind == GameKind::SmithRule) v *= 0.5;
          out.m(out.index(j, i), out.index(k, i2)) = v;
          out.m(out.index(k, i2), out.index(j, i)) = v;
        }
  return out;
}

CostMatrix build_cost_matrix(const AffineInstance& inst) {
  const int n = inst.player_count();
  std::vector<int> counts(n);
  for (int j = 0; j < n; ++j) counts[j] = inst.strategy_count(j);
  int total = 0;
  CostMatrix out;
  out.kind = GameKind::Affine;
  out.offset = strategy_offsets(n, counts, &total);
  out.m = Eigen::MatrixXd::Zero(total + 1, total + 1);

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < counts[j]; ++i) {
      double diag = 0.0;
      for (int e : inst.strategy(j, i))
        diag += inst.resource_weight(e, j) *
                (inst.a(e) * inst.resource_weight(e, j) + inst.b(e));
      out.m(out.index(j, i), out.index(j, i)) = diag;
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < counts[j]; ++i)
      for (int k = j; k < n; ++k)
        for (int i2 = (k == j ? i + 1 : 0); i2 < counts[k]; ++i2) {
          const auto& si = inst.strategy(j, i);
          const auto& sk = inst.strategy(k, i2);
          double v = 0.0;
          auto a = si.begin();
          auto b = sk.begin();
          while (a != si.end() && b != sk.end()) {
            if (*a < *b) ++a;
            else if (*b < *a) ++b;
            else {
              v += inst.a(*a) * inst.resource_weight(*a, j) * inst.resource_weight(*a, k);
              ++a; ++b;
            }
          }
          out.m(out.index(j, i), out.index(k, i2)) = v;
          out.m(out.index(k, i2), out.index(j, i)) = v;
        }
  return out;
}

double primal_value(const CostMatrix& mat, const Assignment& x) {
  if (!x.is_pure()) fail("MixedAssignmentUnsupported", "primal_value requires a pure assignment");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mat.dim());
  v(0) = 1.0;
  for (int j = 0; j < x.player_count(); ++j) v(mat.index(j, x.choice(j))) = 1.0;
  return v.dot(mat.m * v);
}

KernelVector KernelVector::step_vector(std::vector<FStep> steps) {
  KernelVector v;
  v.space = Space::F;
  // drop null steps; they span no measure
  for (auto& s : steps)
    if (s.height != 0.0 && s.breakpoint > 0.0) v.f.push_back(s);
  std::sort(v.f.begin(), v.f.end(), [](const FStep& a, const FStep& b) {
    return a.resource < b.resource || (a.resource == b.resource && a.breakpoint < b.breakpoint);
  });
  return v;
}

KernelVector KernelVector::kernel_vector(std::vector<GAtom> atoms) {
  KernelVector v;
  v.space = Space::G;
  for (auto& a : atoms)
    if (a.weight != 0.0 && a.ratio > 0.0) v.g.push_back(a);
  std::sort(v.g.begin(), v.g.end(), [](const GAtom& a, const GAtom& b) {
    return a.resource < b.resource || (a.resource == b.resource && a.ratio < b.ratio);
  });
  return v;
}

KernelVector KernelVector::euclidean(Eigen::VectorXd coords) {
  KernelVector v;
  v.space = Space::Euclidean;
  v.coords = std::move(coords);
  return v;
}

double inner_product(const KernelVector& u, const KernelVector& v) {
  if (u.space != v.space) fail("SpaceMismatch", "inner product of vectors in different spaces");
  switch (u.space) {
    case Space::Euclidean:
      if (u.coords.size() != v.coords.size())
        fail("SpaceMismatch", "euclidean vectors of different dimension");
      return u.coords.dot(v.coords);
    case Space::F: {
      // <h 1{t<=a}, g 1{t<=b}> integrates to h*g*min(a,b) per shared resource
      double sum = 0.0;
      size_t a = 0;
      for (const FStep& s : u.f) {
        while (a < v.f.size() && v.f[a].resource < s.resource) ++a;
        for (size_t b = a; b < v.f.size() && v.f[b].resource == s.resource; ++b)
          sum += s.height * v.f[b].height * std::min(s.breakpoint, v.f[b].breakpoint);
      }
      return sum;
    }
    case Space::G: {
      double sum = 0.0;
      size_t a = 0;
      for (const GAtom& s : u.g) {
        while (a < v.g.size() && v.g[a].resource < s.resource) ++a;
        for (size_t b = a; b < v.g.size() && v.g[b].resource == s.resource; ++b)
          sum += s.weight * v.g[b].weight * g_kernel(s.ratio, v.g[b].ratio);
      }
      return sum;
    }
  }
  return 0.0;
}

Eigen::MatrixXd g_kernel_matrix(const std::vector<double>& ratios) {
  const int k = static_cast<int>(ratios.size());
  Eigen::MatrixXd m(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = g_kernel(ratios[a], ratios[b]);
  return m;
}

namespace {

std::vector<KernelVector> embed_f(const std::vector<KernelVector>& family) {
  // merged breakpoint grid per resource
  std::map<int, std::vector<double>> grid;
  for (const auto& v : family)
    for (const FStep& s : v.f) grid[s.resource].push_back(s.breakpoint);
  std::map<int, int> base;  // resource -> first coordinate index
  int dim = 0;
  for (auto& [e, pts] : grid) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    base[e] = dim;
    dim += static_cast<int>(pts.size());
  }
  std::vector<KernelVector> out;
  out.reserve(family.size());
  for (const auto& v : family) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    for (const FStep& s : v.f) {
      const auto& pts = grid[s.resource];
      // segment ell = (pts[ell-1], pts[ell]]; the step contributes on every
      // segment whose midpoint lies below its breakpoint
      double prev = 0.0;
      for (size_t ell = 0; ell < pts.size(); ++ell) {
        const double width = pts[ell] - prev;
        const double mid = prev + width / 2.0;
        if (mid <= s.breakpoint && width > 0.0)
          c(base[s.resource] + static_cast<int>(ell)) += s.height * std::sqrt(width);
        prev = pts[ell];
      }
    }
    out.push_back(KernelVector::euclidean(std::move(c)));
  }
  return out;
}

std::vector<KernelVector> embed_g(const std::vector<KernelVector>& family) {
  std::set<double> ratio_set;
  std::set<int> resource_set;
  for (const auto& v : family)
    for (const GAtom& a : v.g) {
      ratio_set.insert(a.ratio);
      resource_set.insert(a.resource);
    }
  const std::vector<double> ratios(ratio_set.begin(), ratio_set.end());
  const int k = static_cast<int>(ratios.size());
  const Eigen::MatrixXd kernel = g_kernel_matrix(ratios);

  // M = sum_t u_t u_t^T via the spectral decomposition; the kernel is
  // positive definite on distinct positive ratios, so an eigenvalue below
  // -1e-8 * ||M|| signals a bug rather than a math failure.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel);
  const double scale = std::max(1e-300, kernel.trace());
  if (k > 0 && eig.eigenvalues()(0) < -1e-8 * scale)
    fail("NonPSDKernel", "restricted harmonic kernel has eigenvalue " +
                             std::to_string(eig.eigenvalues()(0)));
  Eigen::MatrixXd u = eig.eigenvectors();
  for (int t = 0; t < k; ++t)
    u.col(t) *= std::sqrt(std::max(0.0, eig.eigenvalues()(t)));

  std::map<int, int> base;
  int dim = 0;
  for (int e : resource_set) {
    base[e] = dim;
    dim += k;
  }
  std::map<double, int> ratio_index;
  for (int r = 0; r < k; ++r) ratio_index[ratios[r]] = r;

  std::vector<KernelVector> out;
  out.reserve(family.size());
  for (const auto& v : family) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    for (const GAtom& a : v.g) {
      const int r = ratio_index[a.ratio];
      for (int t = 0; t < k; ++t) c(base[a.resource] + t) += a.weight * u(r, t);
    }
    out.push_back(KernelVector::euclidean(std::move(c)));
  }
  return out;
}

}  // namespace

std::vector<KernelVector> embed_euclidean(const std::vector<KernelVector>& family) {
  if (family.empty()) return {};
  const Space space = family.front().space;
  for (const auto& v : family)
    if (v.space != space) fail("SpaceMismatch", "embedding family mixes spaces");
  switch (space) {
    case Space::F: return embed_f(family);
    case Space::G: return embed_g(family);
    case Space::Euclidean: {
      // already Euclidean; pad to a common dimension
      int dim = 0;
      for (const auto& v : family) dim = std::max(dim, static_cast<int>(v.coords.size()));
      std::vector<KernelVector> out;
      out.reserve(family.size());
      for (const auto& v : family) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
        c.head(v.coords.size()) = v.coords;
        out.push_back(KernelVector::euclidean(std::move(c)));
      }
      return out;
    }
  }
  return {};
}

double embedding_max_error(const std::vector<KernelVector>& family,
                           const std::vector<KernelVector>& embedded) {
  if (family.size() != embedded.size())
    fail("DimensionMismatch", "family and embedding differ in size");
  double worst = 0.0;
  for (size_t a = 0; a < family.size(); ++a)
    for (size_t b = a; b < family.size(); ++b) {
      const double closed = inner_product(family[a], family[b]);
      const double dot = embedded[a].coords.dot(embedded[b].coords);
      worst = std::max(worst, std::abs(closed - dot));
    }
  return worst;
}

double gram_min_eigenvalue(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols()) fail("AsymmetricInput", "gram matrix is not square");
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail("AsymmetricInput", "gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace poacert
