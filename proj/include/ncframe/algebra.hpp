#pragma once

// Finite-dimensional C*-algebras A = M_{m_1}(C) + ... + M_{m_s}(C), with
// elements stored as one dense complex block per summand.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncframe/error.hpp"
#include "ncframe/random.hpp"

namespace ncframe {

/// Default relative tolerance for numerical predicates.
inline constexpr double kDefaultTol = 1e-9;

class AlgebraSpec {
 public:
  AlgebraSpec() : dims_{1} {}
  explicit AlgebraSpec(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ShapeError("algebra needs at least one summand");
    for (int m : dims_)
      if (m < 1) throw ShapeError("summand dimensions must be positive");
  }
  AlgebraSpec(std::initializer_list<int> dims) : AlgebraSpec(std::vector<int>(dims)) {}

  static AlgebraSpec scalar() { return AlgebraSpec{1}; }

  std::size_t summands() const { return dims_.size(); }
  int dim(std::size_t j) const { return dims_[j]; }
  const std::vector<int>& dims() const { return dims_; }

  /// Complex dimension sum_j m_j^2.
  int total_dim() const {
    return std::accumulate(dims_.begin(), dims_.end(), 0, [](int acc, int m) { return acc + m * m; });
  }
  /// sum_j m_j, the denominator of the normalized trace.
  int unit_trace() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

  bool is_commutative() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int m) { return m == 1; });
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      if (j) out += ",";
      out += std::to_string(dims_[j]);
    }
    return out + "]";
  }

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;

 private:
  std::vector<int> dims_;
};

inline void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (!(a == b)) throw ShapeError("algebra spec mismatch: " + a.to_string() + " vs " + b.to_string());
}

class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(zero(AlgebraSpec::scalar())) {}

  AlgebraElement(AlgebraSpec spec, std::vector<CMatrix> blocks)
      : spec_(std::move(spec)), blocks_(std::move(blocks)) {
    if (blocks_.size() != spec_.summands()) throw ShapeError("block count does not match algebra spec");
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const int m = spec_.dim(j);
      if (blocks_[j].rows() != m || blocks_[j].cols() != m)
        throw ShapeError("block " + std::to_string(j) + " has wrong shape for spec " + spec_.to_string());
    }
  }

  static AlgebraElement zero(const AlgebraSpec& spec) {
    std::vector<CMatrix> blocks;
    for (int m : spec.dims()) blocks.push_back(CMatrix::Zero(m, m));
    return {spec, std::move(blocks)};
  }

  static AlgebraElement identity(const AlgebraSpec& spec) { return scalar(spec, 1.0); }

  /// c * 1_A.
  static AlgebraElement scalar(const AlgebraSpec& spec, Complex c) {
    std::vector<CMatrix> blocks;
    for (int m : spec.dims()) blocks.push_back(c * CMatrix::Identity(m, m));
    return {spec, std::move(blocks)};
  }

  /// Independent standard complex Gaussian entries in every block.
  static AlgebraElement random(const AlgebraSpec& spec, Rng& rng) {
    std::vector<CMatrix> blocks;
    for (int m : spec.dims()) blocks.push_back(gaussian_matrix(m, m, rng));
    return {spec, std::move(blocks)};
  }

  const AlgebraSpec& spec() const { return spec_; }
  const CMatrix& block(std::size_t j) const { return blocks_[j]; }
  CMatrix& block(std::size_t j) { return blocks_[j]; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_spec(a.spec_, b.spec_);
    AlgebraElement out = a;
    for (std::size_t j = 0; j < out.blocks_.size(); ++j) out.blocks_[j] += b.blocks_[j];
    return out;
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_spec(a.spec_, b.spec_);
    AlgebraElement out = a;
    for (std::size_t j = 0; j < out.blocks_.size(); ++j) out.blocks_[j] -= b.blocks_[j];
    return out;
  }
  friend AlgebraElement operator-(const AlgebraElement& a) {
    AlgebraElement out = a;
    for (auto& blk : out.blocks_) blk = -blk;
    return out;
  }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_spec(a.spec_, b.spec_);
    AlgebraElement out = a;
    for (std::size_t j = 0; j < out.blocks_.size(); ++j) out.blocks_[j] = a.blocks_[j] * b.blocks_[j];
    return out;
  }
  friend AlgebraElement operator*(Complex c, const AlgebraElement& a) {
    AlgebraElement out = a;
    for (auto& blk : out.blocks_) blk *= c;
    return out;
  }

  /// Bit-identical block comparison.
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.spec_ == b.spec_)) return false;
    for (std::size_t j = 0; j < a.blocks_.size(); ++j)
      if (a.blocks_[j] != b.blocks_[j]) return false;
    return true;
  }

 private:
  AlgebraSpec spec_;
  std::vector<CMatrix> blocks_;
};

inline AlgebraElement elem_add(const AlgebraElement& a, const AlgebraElement& b) { return a + b; }
inline AlgebraElement elem_mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

/// Blockwise conjugate transpose.
inline AlgebraElement elem_adjoint(const AlgebraElement& a) {
  std::vector<CMatrix> blocks;
  blocks.reserve(a.blocks().size());
  for (const auto& blk : a.blocks()) blocks.push_back(blk.adjoint());
  return {a.spec(), std::move(blocks)};
}

/// The C*-norm: largest singular value over all blocks.
inline double elem_norm(const AlgebraElement& a) {
  double out = 0.0;
  for (const auto& blk : a.blocks()) out = std::max(out, spectral_norm(blk));
  return out;
}

/// Hermitian within tol and smallest eigenvalue >= -tol, block by block.
inline bool elem_is_positive(const AlgebraElement& a, double tol = kDefaultTol) {
  for (const auto& blk : a.blocks()) {
    if ((blk - blk.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    const CMatrix herm = 0.5 * (blk + blk.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol) return false;
  }
  return true;
}

/// (sum_j tr(a_j)) / (sum_j m_j), so that tau(1_A) = 1.
inline Complex normalized_trace(const AlgebraElement& a) {
  Complex sum = 0.0;
  for (const auto& blk : a.blocks()) sum += blk.trace();
  return sum / static_cast<double>(a.spec().unit_trace());
}

}  // namespace ncframe
