#pragma once

// Matrices over A = (+)_j M_{m_j}(C) and the right Hilbert A-module A^n.
//
// An r x c matrix over A is stored through its flat view: for each summand j
// one (r*m_j) x (c*m_j) complex matrix whose (a, b) block of size m_j x m_j is
// the j-th block of entry (a, b). Since flattening is a *-isomorphism, every
// module operation is carried out on the flat view, summand by summand.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncframe/algebra.hpp"
#include "ncframe/error.hpp"
#include "ncframe/random.hpp"

namespace ncframe {

/// One complex matrix per summand; the j-th has shape (r*m_j) x (c*m_j).
using FlatView = std::vector<CMatrix>;

class AMatrix {
 public:
  AMatrix() : AMatrix(AlgebraSpec::scalar(), 1, 1) {}

  /// Zero matrix.
  AMatrix(AlgebraSpec spec, std::size_t rows, std::size_t cols)
      : spec_(std::move(spec)), rows_(rows), cols_(cols) {
    for (int m : spec_.dims())
      flat_.push_back(CMatrix::Zero(static_cast<Eigen::Index>(rows * m), static_cast<Eigen::Index>(cols * m)));
  }

  static AMatrix zero(const AlgebraSpec& spec, std::size_t rows, std::size_t cols) { return {spec, rows, cols}; }

  static AMatrix identity(const AlgebraSpec& spec, std::size_t n) {
    AMatrix out(spec, n, n);
    for (auto& blk : out.flat_) blk.setIdentity();
    return out;
  }

  /// Inverse of flatten(); validates every summand shape.
  static AMatrix unflatten(FlatView view, std::size_t rows, std::size_t cols, const AlgebraSpec& spec) {
    if (view.size() != spec.summands()) throw ShapeError("flat view has wrong number of summands");
    for (std::size_t j = 0; j < view.size(); ++j) {
      const auto m = static_cast<Eigen::Index>(spec.dim(j));
      if (view[j].rows() != static_cast<Eigen::Index>(rows) * m ||
          view[j].cols() != static_cast<Eigen::Index>(cols) * m)
        throw ShapeError("flat view summand " + std::to_string(j) + " does not match " + std::to_string(rows) +
                         "x" + std::to_string(cols) + " over " + spec.to_string());
    }
    AMatrix out;
    out.spec_ = spec;
    out.rows_ = rows;
    out.cols_ = cols;
    out.flat_ = std::move(view);
    return out;
  }

  /// Seeded matrix with standard complex Gaussian entries in every block.
  static AMatrix random(const AlgebraSpec& spec, std::size_t rows, std::size_t cols, Rng& rng) {
    FlatView view;
    for (int m : spec.dims())
      view.push_back(gaussian_matrix(static_cast<Eigen::Index>(rows * m), static_cast<Eigen::Index>(cols * m), rng));
    return unflatten(std::move(view), rows, cols, spec);
  }

  /// Haar-distributed unitary in each summand (QR of a Gaussian matrix).
  static AMatrix random_unitary(const AlgebraSpec& spec, std::size_t n, Rng& rng) {
    FlatView view;
    for (int m : spec.dims()) view.push_back(haar_unitary(static_cast<Eigen::Index>(n * m), rng));
    return unflatten(std::move(view), n, n, spec);
  }

  const AlgebraSpec& spec() const { return spec_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const FlatView& flat() const { return flat_; }
  const CMatrix& flat(std::size_t j) const { return flat_[j]; }
  CMatrix& flat(std::size_t j) { return flat_[j]; }

  AlgebraElement entry(std::size_t i, std::size_t c) const {
    check_index(i, c);
    std::vector<CMatrix> blocks;
    for (std::size_t j = 0; j < flat_.size(); ++j) {
      const auto m = static_cast<Eigen::Index>(spec_.dim(j));
      blocks.push_back(flat_[j].block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(c) * m, m, m));
    }
    return {spec_, std::move(blocks)};
  }

  void set_entry(std::size_t i, std::size_t c, const AlgebraElement& value) {
    check_index(i, c);
    require_same_spec(spec_, value.spec());
    for (std::size_t j = 0; j < flat_.size(); ++j) {
      const auto m = static_cast<Eigen::Index>(spec_.dim(j));
      flat_[j].block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(c) * m, m, m) = value.block(j);
    }
  }

  /// Column c as an n x 1 matrix (a vector of A^n).
  AMatrix column(std::size_t c) const { return select_columns({c}); }

  /// Columns in the given order.
  AMatrix select_columns(const std::vector<std::size_t>& cols) const {
    if (cols.empty()) throw ShapeError("column selection must be nonempty");
    FlatView view;
    for (std::size_t j = 0; j < flat_.size(); ++j) {
      const auto m = static_cast<Eigen::Index>(spec_.dim(j));
      CMatrix blk(flat_[j].rows(), static_cast<Eigen::Index>(cols.size()) * m);
      for (std::size_t t = 0; t < cols.size(); ++t) {
        if (cols[t] >= cols_) throw IndexError("column index out of range");
        blk.middleCols(static_cast<Eigen::Index>(t) * m, m) = flat_[j].middleCols(static_cast<Eigen::Index>(cols[t]) * m, m);
      }
      view.push_back(std::move(blk));
    }
    return unflatten(std::move(view), rows_, cols.size(), spec_);
  }

  friend AMatrix operator+(const AMatrix& a, const AMatrix& b) {
    a.require_same_shape(b);
    AMatrix out = a;
    for (std::size_t j = 0; j < out.flat_.size(); ++j) out.flat_[j] += b.flat_[j];
    return out;
  }
  friend AMatrix operator-(const AMatrix& a, const AMatrix& b) {
    a.require_same_shape(b);
    AMatrix out = a;
    for (std::size_t j = 0; j < out.flat_.size(); ++j) out.flat_[j] -= b.flat_[j];
    return out;
  }
  friend AMatrix operator*(Complex c, const AMatrix& a) {
    AMatrix out = a;
    for (auto& blk : out.flat_) blk *= c;
    return out;
  }
  friend AMatrix operator*(const AMatrix& a, const AMatrix& b) {
    require_same_spec(a.spec_, b.spec_);
    if (a.cols_ != b.rows_)
      throw ShapeError("matmul: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " times " +
                       std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    FlatView view;
    for (std::size_t j = 0; j < a.flat_.size(); ++j) view.push_back(a.flat_[j] * b.flat_[j]);
    return unflatten(std::move(view), a.rows_, b.cols_, a.spec_);
  }

  friend bool operator==(const AMatrix& a, const AMatrix& b) {
    if (!(a.spec_ == b.spec_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t j = 0; j < a.flat_.size(); ++j)
      if (a.flat_[j] != b.flat_[j]) return false;
    return true;
  }

  void require_same_shape(const AMatrix& other) const {
    require_same_spec(spec_, other.spec_);
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix shape mismatch");
  }

 private:
  void check_index(std::size_t i, std::size_t c) const {
    if (i >= rows_ || c >= cols_) throw IndexError("matrix entry index out of range");
  }

  AlgebraSpec spec_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  FlatView flat_;
};

/// A vector of A^n is an n x 1 AMatrix.
using ModuleVector = AMatrix;

inline FlatView flatten(const AMatrix& m) { return m.flat(); }

inline AMatrix unflatten(FlatView view, std::size_t rows, std::size_t cols, const AlgebraSpec& spec) {
  return AMatrix::unflatten(std::move(view), rows, cols, spec);
}

inline AMatrix matmul(const AMatrix& a, const AMatrix& b) { return a * b; }

inline AMatrix adjoint_matrix(const AMatrix& m) {
  FlatView view;
  for (const auto& blk : m.flat()) view.push_back(blk.adjoint());
  return unflatten(std::move(view), m.cols(), m.rows(), m.spec());
}

/// Norm of M as an element of M_{r x c}(A): the max spectral norm over summands.
inline double matrix_norm(const AMatrix& m) {
  double out = 0.0;
  for (const auto& blk : m.flat()) out = std::max(out, spectral_norm(blk));
  return out;
}

/// <v, w> = sum_i v_i^* w_i (conjugate-linear in v, right A-module).
inline AlgebraElement inner_product(const ModuleVector& v, const ModuleVector& w) {
  require_same_spec(v.spec(), w.spec());
  if (v.cols() != 1 || w.cols() != 1) throw ShapeError("inner_product expects column vectors");
  if (v.rows() != w.rows()) throw ShapeError("inner_product length mismatch");
  std::vector<CMatrix> blocks;
  for (std::size_t j = 0; j < v.flat().size(); ++j) blocks.push_back(v.flat(j).adjoint() * w.flat(j));
  return {v.spec(), std::move(blocks)};
}

/// Right action v * a on every coordinate.
inline ModuleVector right_multiply(const ModuleVector& v, const AlgebraElement& a) {
  require_same_spec(v.spec(), a.spec());
  FlatView view;
  for (std::size_t j = 0; j < v.flat().size(); ++j) {
    const auto m = static_cast<Eigen::Index>(v.spec().dim(j));
    CMatrix blk = v.flat(j);
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(v.cols()); ++c)
      blk.middleCols(c * m, m) = v.flat(j).middleCols(c * m, m) * a.block(j);
    view.push_back(std::move(blk));
  }
  return unflatten(std::move(view), v.rows(), v.cols(), v.spec());
}

/// Standard basis vector e_i of A^n.
inline ModuleVector basis_vector(const AlgebraSpec& spec, std::size_t n, std::size_t i) {
  ModuleVector v(spec, n, 1);
  v.set_entry(i, 0, AlgebraElement::identity(spec));
  return v;
}

inline bool is_unitary(const AMatrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) throw ShapeError("is_unitary expects a square matrix");
  const auto id = AMatrix::identity(m.spec(), m.rows());
  const auto mstar = adjoint_matrix(m);
  return matrix_norm(m * mstar - id) <= tol && matrix_norm(mstar * m - id) <= tol;
}

/// ||M M* M - M|| <= tol * max(1, ||M||).
inline bool is_partial_isometry(const AMatrix& m, double tol = kDefaultTol) {
  const double defect = matrix_norm(m * adjoint_matrix(m) * m - m);
  return defect <= tol * std::max(1.0, matrix_norm(m));
}

namespace detail {

/// Orthonormal basis (as columns) of the orthogonal complement of the row
/// space of a coisometry `x`. Columns of the complement projector are taken by
/// largest remaining norm (ties to the lowest index), Gram-Schmidt'ed twice,
/// and phased so the first nonzero component is real positive.
inline CMatrix complement_basis(const CMatrix& x, double tol) {
  const Eigen::Index dim = x.cols();
  const Eigen::Index need = dim - x.rows();
  CMatrix basis(dim, need);
  if (need == 0) return basis;
  const CMatrix row_basis = x.adjoint();  // orthonormal columns spanning the row space
  const CMatrix projector = CMatrix::Identity(dim, dim) - row_basis * row_basis.adjoint();
  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  auto orthogonalize = [&](Eigen::VectorXcd v, Eigen::Index accepted) {
    for (int pass = 0; pass < 2; ++pass) {
      v -= row_basis * (row_basis.adjoint() * v);
      if (accepted > 0) v -= basis.leftCols(accepted) * (basis.leftCols(accepted).adjoint() * v);
    }
    return v;
  };
  for (Eigen::Index t = 0; t < need; ++t) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    Eigen::VectorXcd best_vec;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      Eigen::VectorXcd v = orthogonalize(projector.col(c), t);
      const double nrm = v.norm();
      if (nrm > best_norm * (1.0 + 1e-12) + 1e-15) {
        best = c;
        best_norm = nrm;
        best_vec = std::move(v);
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    best_vec /= best_norm;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(best_vec(i)) > tol) {
        best_vec *= std::conj(best_vec(i)) / std::abs(best_vec(i));
        break;
      }
    }
    basis.col(t) = best_vec;
  }
  return basis;
}

}  // namespace detail

/// Extends an n x k coisometry (MM* = I_n) to a k x k unitary whose first n
/// rows are M, snapped to the nearest exact coisometry when MM* is only
/// within tol of I_n. The completion is deterministic; W_{k,n} completes to I_k.
inline AMatrix complete_to_unitary(const AMatrix& m, double tol = kDefaultTol) {
  if (m.rows() > m.cols()) throw ShapeError("complete_to_unitary expects rows <= cols");
  const auto id = AMatrix::identity(m.spec(), m.rows());
  const double defect = matrix_norm(m * adjoint_matrix(m) - id);
  if (defect > tol) throw NotCoisometricError(defect);
  FlatView view;
  for (const auto& raw : m.flat()) {
    CMatrix x = raw;
    if (defect > 0.0) {
      // nearest coisometry (X X*)^{-1/2} X
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(x * x.adjoint());
      const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
      x = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint() * x;
    }
    const CMatrix comp = detail::complement_basis(x, tol);
    CMatrix u(x.cols(), x.cols());
    u.topRows(x.rows()) = x;
    u.bottomRows(comp.cols()) = comp.adjoint();
    view.push_back(std::move(u));
  }
  return unflatten(std::move(view), m.cols(), m.cols(), m.spec());
}

/// Q_I: k x k diagonal with 1_A at the positions in `indices` (0-based).
inline AMatrix coordinate_projection(const AlgebraSpec& spec, std::size_t k, const std::vector<std::size_t>& indices) {
  AMatrix q(spec, k, k);
  const auto one = AlgebraElement::identity(spec);
  for (std::size_t i : indices) {
    if (i >= k) throw IndexError("index " + std::to_string(i + 1) + " outside 1.." + std::to_string(k));
    q.set_entry(i, i, one);
  }
  return q;
}

}  // namespace ncframe
