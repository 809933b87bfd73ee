#pragma once

// Frame-potential descent over strict-spherical frames: columns constrained to
// <f_i, f_i> = r 1_A, gradient projected onto the constraint tangent space,
// backtracking line search, retraction after every step.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncframe/algebra.hpp"
#include "ncframe/error.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/module.hpp"
#include "ncframe/random.hpp"

namespace ncframe {

/// sum_j || flatten(F* F)_j ||_F^2.
inline double frame_potential(const Frame& f) {
  double out = 0.0;
  for (const auto& x : f.matrix.flat()) out += (x.adjoint() * x).squaredNorm();
  return out;
}

/// Lower bound sum_j (tr flatten(F* F)_j)^2 / (n m_j), attained exactly by tight frames.
inline double potential_lower_bound(const Frame& f) {
  double out = 0.0;
  for (std::size_t j = 0; j < f.spec().summands(); ++j) {
    const double tr = f.matrix.flat(j).squaredNorm();
    out += tr * tr / (static_cast<double>(f.n()) * f.spec().dim(j));
  }
  return out;
}

/// Real gradient of frame_potential w.r.t. the flattened entries: 4 X (X* X).
inline AMatrix potential_gradient(const Frame& f) {
  FlatView view;
  for (const auto& x : f.matrix.flat()) view.push_back(4.0 * x * (x.adjoint() * x));
  return unflatten(std::move(view), f.n(), f.k(), f.spec());
}

/// Projection of a direction D onto the tangent space of
/// { X : X_i* X_i = r I for every column block } at F: D_i - X_i herm(X_i* D_i) / r.
inline AMatrix project_tangent(const Frame& f, const AMatrix& direction, double radius) {
  f.matrix.require_same_shape(direction);
  FlatView view;
  for (std::size_t j = 0; j < f.spec().summands(); ++j) {
    const auto m = static_cast<Eigen::Index>(f.spec().dim(j));
    const auto& x = f.matrix.flat(j);
    CMatrix d = direction.flat(j);
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(f.k()); ++c) {
      const CMatrix xi = x.middleCols(c * m, m);
      const CMatrix inner = xi.adjoint() * d.middleCols(c * m, m);
      d.middleCols(c * m, m) -= xi * (0.5 * (inner + inner.adjoint())) / radius;
    }
    view.push_back(std::move(d));
  }
  return unflatten(std::move(view), f.n(), f.k(), f.spec());
}

/// Each column replaced by f_i (<f_i, f_i> / r)^{-1/2}. Throws
/// DegenerateColumnError when some <f_i, f_i> has an eigenvalue <= tol.
inline Frame retract_spherical(const Frame& f, double radius, double tol = kDefaultTol) {
  if (!(radius > 0.0)) throw ShapeError("radius must be positive");
  AMatrix out = f.matrix;
  for (std::size_t j = 0; j < f.spec().summands(); ++j) {
    const auto m = static_cast<Eigen::Index>(f.spec().dim(j));
    auto& x = out.flat(j);
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(f.k()); ++c) {
      const CMatrix xi = x.middleCols(c * m, m);
      CMatrix gram = xi.adjoint() * xi / radius;
      gram = 0.5 * (gram + gram.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
      const auto& vals = eig.eigenvalues();
      if (vals.minCoeff() <= tol) throw DegenerateColumnError(static_cast<std::size_t>(c));
      const CMatrix inv_sqrt =
          eig.eigenvectors() * vals.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
      x.middleCols(c * m, m) = xi * inv_sqrt;
    }
  }
  return Frame(std::move(out));
}

struct OptimizerConfig {
  double step_size = 0.05;
  std::size_t max_iters = 20000;
  double tight_tol = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> radius;  // defaults to n / k, giving b = 1

  double radius_for(std::size_t k, std::size_t n) const {
    return radius.value_or(static_cast<double>(n) / static_cast<double>(k));
  }
};

struct TraceEntry {
  std::size_t iteration = 0;
  double potential = 0.0;
  double excess = 0.0;  // sum_j ||S_j - b I||_F^2 = potential - bound on the constraint set
  double residual = 0.0;
};

struct OptimizerTrace {
  OptimizerConfig config;
  AlgebraSpec spec;
  std::size_t k = 0;
  std::size_t n = 0;
  double radius = 0.0;
  std::vector<TraceEntry> iterates;  // accepted iterates
  Frame frame;
  bool converged = false;
  bool failed = false;
  std::string failure;
  double final_residual = 0.0;
};

namespace detail {

/// sum_j || X_j X_j* - b I ||_F^2; potential minus its bound when traces are fixed.
inline double excess_potential(const Frame& f, double b) {
  double out = 0.0;
  for (const auto& x : f.matrix.flat()) {
    CMatrix s = x * x.adjoint();
    s.diagonal().array() -= b;
    out += s.squaredNorm();
  }
  return out;
}

/// Gradient of excess_potential: 4 (S - b I) X per summand.
inline AMatrix excess_gradient(const Frame& f, double b) {
  FlatView view;
  for (const auto& x : f.matrix.flat()) {
    CMatrix s = x * x.adjoint();
    s.diagonal().array() -= b;
    view.push_back(4.0 * s * x);
  }
  return unflatten(std::move(view), f.n(), f.k(), f.spec());
}

}  // namespace detail

/// Projected gradient descent from a seeded Gaussian start.
inline OptimizerTrace minimize(const AlgebraSpec& spec, std::size_t k, std::size_t n, const OptimizerConfig& config) {
  if (k < n) throw ShapeError("minimize requires k >= n");
  if (n == 0) throw ShapeError("n must be positive");
  if (!(config.step_size > 0.0) || !(config.tight_tol > 0.0)) throw ShapeError("step size and tolerance must be positive");
  OptimizerTrace trace;
  trace.config = config;
  trace.spec = spec;
  trace.k = k;
  trace.n = n;
  trace.radius = config.radius_for(k, n);
  if (!(trace.radius > 0.0)) throw ShapeError("radius must be positive");
  const double b = static_cast<double>(k) * trace.radius / static_cast<double>(n);

  Rng rng(config.seed);
  AMatrix start = AMatrix::random(spec, n, k, rng);
  std::optional<Frame> current;
  for (std::uint64_t attempt = 0; attempt <= 10 && !current; ++attempt) {
    try {
      current = retract_spherical(Frame(start), trace.radius);
    } catch (const DegenerateColumnError& e) {
      if (attempt == 10) break;
      Rng col_rng(split_seed(config.seed, attempt));
      const auto col = AMatrix::random(spec, n, 1, col_rng);
      for (std::size_t i = 0; i < n; ++i) start.set_entry(i, e.column, col.entry(i, 0));
    }
  }
  if (!current) {
    trace.failed = true;
    trace.failure = "degenerate columns persisted after 10 re-randomizations";
    trace.frame = Frame(start);
    return trace;
  }

  Frame f = std::move(*current);
  double excess = detail::excess_potential(f, b);
  for (std::size_t iter = 0;; ++iter) {
    const double residual = check_tight(f).residual;
    trace.iterates.push_back({iter, frame_potential(f), excess, residual});
    if (residual <= config.tight_tol) {
      trace.converged = true;
      break;
    }
    if (iter + 1 >= config.max_iters) break;
    const AMatrix dir = project_tangent(f, detail::excess_gradient(f, b), trace.radius);
    bool accepted = false;
    for (double step = config.step_size; step > 1e-14; step *= 0.5) {
      try {
        Frame trial = retract_spherical(Frame(f.matrix - Complex(step) * dir), trace.radius);
        const double trial_excess = detail::excess_potential(trial, b);
        if (trial_excess < excess) {
          f = std::move(trial);
          excess = trial_excess;
          accepted = true;
          break;
        }
      } catch (const DegenerateColumnError&) {
      }
    }
    if (!accepted) break;  // stationary to working precision
  }
  trace.final_residual = trace.iterates.back().residual;
  trace.frame = std::move(f);
  return trace;
}

}  // namespace ncframe
