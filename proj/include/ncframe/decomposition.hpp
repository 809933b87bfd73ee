#pragma once

// Ortho-decomposition of tight frames: commutation of the Gram matrix with
// coordinate projections, range submodules, the two-sided equivalence check,
// the k / gcd(k, n) divisibility rule and the partition family P(k, k').

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncframe/algebra.hpp"
#include "ncframe/error.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/module.hpp"

namespace ncframe {

using IndexSet = std::vector<std::size_t>;  // 0-based, ascending

/// Set partition of {0, ..., k-1}. Blocks are kept in canonical order: each
/// block ascending, blocks ordered by their smallest element.
class Partition {
 public:
  Partition() = default;
  Partition(std::size_t k, std::vector<IndexSet> blocks) : k_(k), blocks_(std::move(blocks)) {
    std::vector<bool> seen(k_, false);
    for (auto& blk : blocks_) {
      if (blk.empty()) throw PartitionError("partition blocks must be nonempty");
      std::sort(blk.begin(), blk.end());
      for (std::size_t i : blk) {
        if (i >= k_) throw IndexError("partition index out of range");
        if (seen[i]) throw PartitionError("partition blocks overlap");
        seen[i] = true;
      }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      throw PartitionError("partition does not cover every index");
    std::sort(blocks_.begin(), blocks_.end(), [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
  }

  std::size_t k() const { return k_; }
  const std::vector<IndexSet>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

  /// Relabel by index map i -> perm[i].
  Partition relabeled(const std::vector<std::size_t>& perm) const {
    std::vector<IndexSet> out;
    for (const auto& blk : blocks_) {
      IndexSet nb;
      for (std::size_t i : blk) nb.push_back(perm.at(i));
      out.push_back(std::move(nb));
    }
    return {k_, std::move(out)};
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<IndexSet> blocks_;
};

inline IndexSet complement(const IndexSet& set, std::size_t k) {
  std::vector<bool> in(k, false);
  for (std::size_t i : set) {
    if (i >= k) throw IndexError("index out of range");
    in[i] = true;
  }
  IndexSet out;
  for (std::size_t i = 0; i < k; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

/// ||Q_I G - G Q_I|| with G = F* F.
inline double commutation_residual(const Frame& f, const IndexSet& indices) {
  const auto q = coordinate_projection(f.spec(), f.k(), indices);
  const auto g = gram_matrix(f);
  return matrix_norm(q * g - g * q);
}

/// Columns listed in `indices`, original order preserved.
inline Frame restrict(const Frame& f, IndexSet indices) {
  if (indices.empty()) throw IndexError("restrict: index set is empty");
  std::sort(indices.begin(), indices.end());
  return Frame(f.matrix.select_columns(indices));
}

/// Orthogonal projection onto the range of F in each summand, singular values
/// at or below tol * max(1, sigma_max) treated as zero.
inline AMatrix range_projection(const Frame& f, double tol = kDefaultTol) {
  FlatView view;
  for (const auto& x : f.matrix.flat()) {
    Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    const CMatrix basis = svd.matrixU().leftCols(rank);
    view.push_back(basis * basis.adjoint());
  }
  return unflatten(std::move(view), f.n(), f.n(), f.spec());
}

/// Finest partition whose blocks are the connected components of the graph
/// i ~ j iff ||<f_i, f_j>|| > tol * ||F||^2.
inline Partition gram_support_components(const Frame& f, double tol) {
  const auto g = gram_matrix(f);
  const double fn = matrix_norm(f.matrix);
  const double edge_tol = tol * fn * fn;
  const std::size_t k = f.k();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (elem_norm(g.entry(i, j)) > edge_tol) parent[find(i)] = find(j);
  std::vector<IndexSet> groups(k);
  for (std::size_t i = 0; i < k; ++i) groups[find(i)].push_back(i);
  std::vector<IndexSet> blocks;
  for (auto& grp : groups)
    if (!grp.empty()) blocks.push_back(std::move(grp));
  return {k, std::move(blocks)};
}

/// Finest ortho-decomposition of a tight frame (rho_F). Throws NotTightError.
inline Partition ortho_decompose(const Frame& f, double tol = kDefaultTol) {
  const auto report = check_tight(f, tol);
  if (!report.is_tight) throw NotTightError(report.residual);
  return gram_support_components(f, tol);
}

struct SplittingReport {
  bool commutes = false;        // left side: Q_I commutes with F* F
  bool splits = false;          // right side: tight on orthogonal V and V-perp
  double commutation_residual = 0.0;
  double subframe_residual = 0.0;     // ||F_I F_I* - b P||
  double complement_residual = 0.0;   // ||F_Ic F_Ic* - b (I - P)||
  double orthogonality_residual = 0.0;  // ||P P_c||
  bool agree() const { return commutes == splits; }
};

/// Left side: Q_I commutes with the Gram matrix within tol * max(1, b).
inline bool splitting_commutes(const Frame& f, const IndexSet& indices, double b, double tol, double* residual = nullptr) {
  const double r = commutation_residual(f, indices);
  if (residual) *residual = r;
  return r <= tol * std::max(1.0, b);
}

/// Right side, evaluated without the Gram matrix: with P the range projection
/// of F_I, F_I is tight on P and F_Ic on I - P with the same b, and the ranges
/// of the two sub-frames are orthogonal.
inline bool splitting_holds(const Frame& f, const IndexSet& indices, double b, double tol, SplittingReport* out = nullptr) {
  const auto& spec = f.spec();
  const std::size_t n = f.n();
  const auto id = AMatrix::identity(spec, n);
  const auto rest = complement(indices, f.k());
  const AMatrix zero(spec, n, n);
  const AMatrix p = indices.empty() ? zero : range_projection(restrict(f, indices), tol);
  const AMatrix pc = rest.empty() ? zero : range_projection(restrict(f, rest), tol);
  auto op = [&](const IndexSet& set) { return set.empty() ? zero : frame_operator(restrict(f, set)); };
  const double sub = matrix_norm(op(indices) - Complex(b) * p);
  const double comp = matrix_norm(op(rest) - Complex(b) * (id - p));
  const double orth = matrix_norm(p * pc);
  if (out) {
    out->subframe_residual = sub;
    out->complement_residual = comp;
    out->orthogonality_residual = orth;
  }
  const double scale = tol * std::max(1.0, b);
  return sub <= scale && comp <= scale && orth <= tol;
}

/// Evaluates both sides of the commutation <=> orthogonal-splitting
/// equivalence independently. Throws NotTightError.
inline SplittingReport verify_splitting(const Frame& f, IndexSet indices, double tol = kDefaultTol) {
  const auto tight = check_tight(f, tol);
  if (!tight.is_tight) throw NotTightError(tight.residual);
  std::sort(indices.begin(), indices.end());
  SplittingReport report;
  report.commutes = splitting_commutes(f, indices, tight.b, tol, &report.commutation_residual);
  report.splits = splitting_holds(f, indices, tight.b, tol, &report);
  return report;
}

struct DivisibilityReport {
  std::size_t d = 1;        // gcd(k, n)
  std::size_t k_prime = 1;  // k / d
  std::vector<bool> block_ok;
  bool all_ok() const { return std::all_of(block_ok.begin(), block_ok.end(), [](bool b) { return b; }); }
};

/// Flags each block whose size is a multiple of k / gcd(k, n).
inline DivisibilityReport divisibility_check(const Partition& p, std::size_t k, std::size_t n) {
  if (p.k() != k) throw PartitionError("partition is not over {1..k}");
  if (k == 0 || n == 0) throw ShapeError("k and n must be positive");
  DivisibilityReport report;
  report.d = std::gcd(k, n);
  report.k_prime = k / report.d;
  for (const auto& blk : p.blocks()) report.block_ok.push_back(blk.size() % report.k_prime == 0);
  return report;
}

namespace detail {

inline void extend_partitions(std::size_t k, std::size_t k_prime, std::vector<bool>& used,
                              std::vector<IndexSet>& current, std::vector<Partition>& out) {
  std::size_t first = 0;
  while (first < k && used[first]) ++first;
  if (first == k) {
    out.emplace_back(k, current);
    return;
  }
  IndexSet free;
  for (std::size_t i = first + 1; i < k; ++i)
    if (!used[i]) free.push_back(i);
  used[first] = true;
  for (std::size_t size = k_prime; size <= free.size() + 1; size += k_prime) {
    // All (size - 1)-subsets of `free`, lexicographic.
    const std::size_t pick = size - 1;
    std::vector<std::size_t> idx(pick);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      IndexSet block{first};
      for (std::size_t t : idx) block.push_back(free[t]);
      for (std::size_t t : idx) used[free[t]] = true;
      current.push_back(block);
      extend_partitions(k, k_prime, used, current, out);
      current.pop_back();
      for (std::size_t t : idx) used[free[t]] = false;
      // next combination
      std::size_t pos = pick;
      while (pos > 0 && idx[pos - 1] == free.size() - pick + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t t = pos; t < pick; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  used[first] = false;
}

}  // namespace detail

/// All partitions of {0..k-1} whose block sizes are positive multiples of k_prime.
inline std::vector<Partition> enumerate_partitions(std::size_t k, std::size_t k_prime) {
  if (k == 0) throw PartitionError("k must be positive");
  if (k_prime == 0 || k % k_prime != 0) throw PartitionError("k' must divide k");
  std::vector<Partition> out;
  std::vector<bool> used(k, false);
  std::vector<IndexSet> current;
  detail::extend_partitions(k, k_prime, used, current, out);
  return out;
}

struct SigmaClass {
  Partition sigma;
  DivisibilityReport divisibility;
  bool in_family = false;  // sigma in P(k, k')
};

/// Stratum of a tight frame: sigma_F and whether it lies in P(k, k').
inline SigmaClass classify_sigma(const Frame& f, double tol = kDefaultTol) {
  SigmaClass out;
  out.sigma = ortho_decompose(f, tol);
  out.divisibility = divisibility_check(out.sigma, f.k(), f.n());
  out.in_family = out.divisibility.all_ok();
  return out;
}

/// Block-diagonal embedding of frames on A^{n_1}, ..., A^{n_p} into
/// A^{n_1 + ... + n_p}. Every part must be tight with constant b.
inline Frame direct_sum_frames(const std::vector<Frame>& parts, double b, double tol = kDefaultTol) {
  if (parts.empty()) throw ShapeError("direct_sum_frames needs at least one part");
  const auto& spec = parts.front().spec();
  std::size_t n = 0, k = 0;
  for (const auto& part : parts) {
    require_same_spec(spec, part.spec());
    const auto report = check_tight(part, tol);
    if (!report.is_tight || std::abs(report.b - b) > tol * std::max(1.0, b))
      throw ConstantMismatchError("direct_sum_frames: part is not tight with constant " + std::to_string(b) +
                                  " (got b=" + std::to_string(report.b) + ")");
    n += part.n();
    k += part.k();
  }
  AMatrix out(spec, n, k);
  for (std::size_t j = 0; j < spec.summands(); ++j) {
    const auto m = static_cast<Eigen::Index>(spec.dim(j));
    Eigen::Index row = 0, col = 0;
    for (const auto& part : parts) {
      const auto& x = part.matrix.flat(j);
      out.flat(j).block(row, col, x.rows(), x.cols()) = x;
      row += static_cast<Eigen::Index>(part.n()) * m;
      col += static_cast<Eigen::Index>(part.k()) * m;
    }
  }
  return Frame(std::move(out));
}

/// F * Pi, where column i of the result is column perm[i] of F.
inline Frame permute_columns(const Frame& f, const std::vector<std::size_t>& perm) {
  if (perm.size() != f.k()) throw ShapeError("permutation length must equal k");
  return Frame(f.matrix.select_columns(perm));
}

}  // namespace ncframe
