#pragma once

// Tight frames in A^n: the tightness test F F* = b I, the normal form
// F = sqrt(b) W_{k,n} U, and its inverse (factorization).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ncframe/algebra.hpp"
#include "ncframe/error.hpp"
#include "ncframe/module.hpp"
#include "ncframe/random.hpp"

namespace ncframe {

/// Columns f_1..f_k of an n x k matrix over A.
struct Frame {
  AMatrix matrix;

  Frame() = default;
  explicit Frame(AMatrix m) : matrix(std::move(m)) {}

  const AlgebraSpec& spec() const { return matrix.spec(); }
  std::size_t n() const { return matrix.rows(); }
  std::size_t k() const { return matrix.cols(); }
  ModuleVector column(std::size_t i) const { return matrix.column(i); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct TightnessReport {
  double b = 0.0;
  double residual = 0.0;  // max_j || S_j - b I ||
  bool is_tight = false;
  std::vector<double> per_summand_b;
};

/// S = F F*.
inline AMatrix frame_operator(const Frame& f) { return f.matrix * adjoint_matrix(f.matrix); }

/// Gram matrix F* F; entry (i, j) is <f_i, f_j>.
inline AMatrix gram_matrix(const Frame& f) { return adjoint_matrix(f.matrix) * f.matrix; }

inline TightnessReport check_tight(const Frame& f, double tol = kDefaultTol) {
  const AMatrix s = frame_operator(f);
  TightnessReport report;
  const auto& spec = f.spec();
  for (std::size_t j = 0; j < spec.summands(); ++j) {
    const double denom = static_cast<double>(f.n()) * spec.dim(j);
    report.per_summand_b.push_back(s.flat(j).trace().real() / denom);
  }
  double sum = 0.0;
  for (double bj : report.per_summand_b) sum += bj;
  report.b = sum / static_cast<double>(report.per_summand_b.size());
  for (std::size_t j = 0; j < spec.summands(); ++j) {
    const auto dim = s.flat(j).rows();
    report.residual = std::max(report.residual, spectral_norm(s.flat(j) - report.b * CMatrix::Identity(dim, dim)));
  }
  const double scale = tol * std::max(1.0, report.b);
  bool agree = true;
  for (double bj : report.per_summand_b) agree = agree && std::abs(bj - report.b) <= scale;
  report.is_tight = report.b > tol && report.residual <= scale && agree;
  return report;
}

struct ScalarDefinitionReport {
  double max_equality_deviation = 0.0;
  std::size_t inequality_violations = 0;
  double max_excess = 0.0;  // largest positive Delta seen
  std::size_t samples = 0;
};

/// Delta(v) = sum_i ||<v, f_i>||^2 - b ||<v, v>||.
inline double scalar_definition_gap(const Frame& f, double b, const ModuleVector& v) {
  double lhs = 0.0;
  for (std::size_t i = 0; i < f.k(); ++i) {
    const double nrm = elem_norm(inner_product(v, f.column(i)));
    lhs += nrm * nrm;
  }
  return lhs - b * elem_norm(inner_product(v, v));
}

/// Monte Carlo comparison of the scalar-norm form of tightness against b.
/// Sample t is drawn from its own stream split_seed(seed, t).
inline ScalarDefinitionReport scalar_definition_check(const Frame& f, double b, std::size_t num_samples,
                                                      std::uint64_t seed, double tol = kDefaultTol) {
  ScalarDefinitionReport report;
  report.samples = num_samples;
  for (std::size_t t = 0; t < num_samples; ++t) {
    Rng rng(split_seed(seed, t));
    const auto v = AMatrix::random(f.spec(), f.n(), 1, rng);
    const double delta = scalar_definition_gap(f, b, v);
    report.max_equality_deviation = std::max(report.max_equality_deviation, std::abs(delta));
    report.max_excess = std::max(report.max_excess, delta);
    if (delta < -tol) ++report.inequality_violations;
  }
  return report;
}

enum class SphericalMode { strict, equal_norm };

struct SphericalReport {
  bool spherical = false;
  double radius = 0.0;          // common r (strict) or common norm (equal_norm)
  double max_deviation = 0.0;   // worst departure from the common value
  std::vector<double> radii;    // per column
};

/// strict: <f_i, f_i> = r 1_A for one r > 0. equal_norm: ||<f_i, f_i>|| all equal.
inline SphericalReport is_spherical(const Frame& f, double tol = kDefaultTol,
                                    SphericalMode mode = SphericalMode::strict) {
  SphericalReport report;
  std::vector<AlgebraElement> selfs;
  for (std::size_t i = 0; i < f.k(); ++i) {
    const auto col = f.column(i);
    selfs.push_back(inner_product(col, col));
    report.radii.push_back(mode == SphericalMode::strict ? normalized_trace(selfs.back()).real()
                                                         : elem_norm(selfs.back()));
  }
  double sum = 0.0;
  for (double r : report.radii) sum += r;
  report.radius = sum / static_cast<double>(report.radii.size());
  for (std::size_t i = 0; i < f.k(); ++i) {
    double dev = std::abs(report.radii[i] - report.radius);
    if (mode == SphericalMode::strict)
      dev = std::max(dev, elem_norm(selfs[i] - AlgebraElement::scalar(f.spec(), report.radius)));
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.spherical = report.radius > tol && report.max_deviation <= tol * std::max(1.0, report.radius);
  return report;
}

/// W_{k,n} = [I_n | 0].
inline AMatrix w_matrix(const AlgebraSpec& spec, std::size_t k, std::size_t n) {
  if (k < n) throw ShapeError("w_matrix requires k >= n");
  AMatrix w(spec, n, k);
  for (std::size_t j = 0; j < spec.summands(); ++j) {
    const auto rows = w.flat(j).rows();
    w.flat(j).leftCols(rows).setIdentity();
  }
  return w;
}

/// sqrt(b) W_{k,n} U for a k x k unitary U.
inline Frame canonical_frame(const AlgebraSpec& spec, std::size_t k, std::size_t n, double b, const AMatrix& u,
                             double tol = kDefaultTol) {
  if (!(b > 0.0)) throw ShapeError("frame constant must be positive");
  require_same_spec(spec, u.spec());
  if (u.rows() != k || u.cols() != k) throw ShapeError("canonical_frame expects a k x k unitary");
  if (!is_unitary(u, tol)) throw NotUnitaryError("canonical_frame: U is not unitary");
  return Frame(Complex(std::sqrt(b)) * (w_matrix(spec, k, n) * u));
}

struct Factorization {
  double b = 0.0;
  AMatrix u;
  double reconstruction_residual = 0.0;  // ||F - sqrt(b) W U||
};

/// Recovers (b, U) with F = sqrt(b) W_{k,n} U. Throws FactorizationError
/// when F is not tight.
inline Factorization factorize(const Frame& f, double tol = kDefaultTol) {
  const auto report = check_tight(f, tol);
  if (!report.is_tight) throw FactorizationError(report.residual);
  const double b = report.b;
  const AMatrix g = Complex(1.0 / std::sqrt(b)) * f.matrix;
  Factorization out;
  out.b = b;
  out.u = complete_to_unitary(g, tol * std::max(1.0, 1.0 / b));
  const AMatrix rebuilt = Complex(std::sqrt(b)) * (w_matrix(f.spec(), f.k(), f.n()) * out.u);
  out.reconstruction_residual = matrix_norm(f.matrix - rebuilt);
  return out;
}

/// canonical_frame with U drawn Haar-uniformly per summand.
inline Frame random_tight_frame(const AlgebraSpec& spec, std::size_t k, std::size_t n, double b, std::uint64_t seed) {
  if (k < n) throw ShapeError("random_tight_frame requires k >= n");
  if (!(b > 0.0)) throw ShapeError("frame constant must be positive");
  Rng rng(seed);
  const auto u = AMatrix::random_unitary(spec, k, rng);
  return Frame(Complex(std::sqrt(b)) * (w_matrix(spec, k, n) * u));
}

}  // namespace ncframe
