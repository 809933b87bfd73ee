#pragma once

// Reproducible frame collections used by the self-test and the acceptance
// suite: named fixtures, generic tight frames, block-diagonal fixtures hidden
// behind a unitary change of basis and a column permutation, and
// strict-spherical frames produced by the optimizer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncframe/decomposition.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/module.hpp"
#include "ncframe/optimize.hpp"
#include "ncframe/random.hpp"

namespace ncframe::corpus {

struct LabeledFrame {
  std::string label;
  Frame frame;
  double b = 1.0;
};

/// Three unit vectors of C^2 at 90, 210 and 330 degrees, entries lifted to c 1_A.
inline Frame mercedes_benz_frame(const AlgebraSpec& spec = AlgebraSpec::scalar()) {
  const double s = std::sqrt(3.0) / 2.0;
  const double coords[2][3] = {{0.0, -s, s}, {1.0, -0.5, -0.5}};
  AMatrix m(spec, 2, 3);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) m.set_entry(r, c, AlgebraElement::scalar(spec, coords[r][c]));
  return Frame(std::move(m));
}

/// Standard basis e_1..e_n of A^n as a frame (k = n, b = 1).
inline Frame orthonormal_basis_frame(const AlgebraSpec& spec, std::size_t n) {
  return Frame(AMatrix::identity(spec, n));
}

/// Left multiplication by a unitary of A^n followed by a column shuffle.
/// Preserves tightness, b and the column Grams up to relabeling.
inline Frame disguise(const Frame& f, Rng& rng) {
  const auto v = AMatrix::random_unitary(f.spec(), f.n(), rng);
  std::vector<std::size_t> perm(f.k());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return permute_columns(Frame(v * f.matrix), perm);
}

struct Shape {
  std::size_t k;
  std::size_t n;
};

/// Tight frames over spec with k <= max_k for the commutation/splitting
/// equivalence scan: named fixtures, generic frames, k = n, and disguised
/// direct sums.
inline std::vector<LabeledFrame> splitting_corpus(const AlgebraSpec& spec, std::size_t max_k, std::uint64_t seed) {
  std::vector<LabeledFrame> out;
  const std::string tag = spec.to_string();
  const double bs[] = {0.5, 1.0, 2.0};
  auto keep = [&](std::string label, Frame f, double b) {
    if (f.k() <= max_k) out.push_back({tag + " " + std::move(label), std::move(f), b});
  };
  std::uint64_t stream = 0;
  auto next_seed = [&] { return split_seed(seed, stream++); };

  keep("mercedes", mercedes_benz_frame(spec), 1.5);
  keep("double-mercedes", direct_sum_frames({mercedes_benz_frame(spec), mercedes_benz_frame(spec)}, 1.5), 1.5);

  const Shape generic[] = {{3, 2}, {4, 2}, {5, 3}, {6, 4}, {7, 3}, {8, 5}};
  for (int rep = 0; rep < 2; ++rep)
    for (std::size_t i = 0; i < std::size(generic); ++i) {
      const auto [k, n] = generic[i];
      const double b = bs[(i + rep) % 3];
      keep("generic k=" + std::to_string(k) + " n=" + std::to_string(n), random_tight_frame(spec, k, n, b, next_seed()), b);
    }

  for (std::size_t n : {2u, 3u, 4u}) {
    const double b = bs[n % 3];
    keep("square k=n=" + std::to_string(n), random_tight_frame(spec, n, n, b, next_seed()), b);
  }
  keep("orthonormal basis n=3", orthonormal_basis_frame(spec, 3), 1.0);

  const std::vector<std::vector<Shape>> sums = {
      {{2, 1}, {3, 2}}, {{3, 2}, {2, 2}}, {{2, 1}, {2, 1}, {3, 1}}, {{4, 2}, {4, 3}}, {{3, 3}, {3, 1}}};
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double b = bs[i % 3];
    std::vector<Frame> parts;
    std::string label = "block";
    for (const auto& [k, n] : sums[i]) {
      parts.push_back(random_tight_frame(spec, k, n, b, next_seed()));
      label += " (" + std::to_string(k) + "," + std::to_string(n) + ")";
    }
    const auto plain = direct_sum_frames(parts, b);
    Rng rng(next_seed());
    keep(label, plain, b);
    keep(label + " disguised", disguise(plain, rng), b);
  }
  return out;
}

/// Strict-spherical tight frame from the optimizer, or nothing when the run
/// did not converge.
inline std::optional<Frame> spherical_frame(const AlgebraSpec& spec, std::size_t k, std::size_t n, std::uint64_t seed,
                                            std::optional<double> radius = std::nullopt) {
  OptimizerConfig config;
  config.seed = seed;
  config.radius = radius;
  auto trace = minimize(spec, k, n, config);
  if (!trace.converged) return std::nullopt;
  return std::move(trace.frame);
}

/// Strict-spherical tight frames with k <= 12: optimizer outputs and
/// disguised direct sums of optimizer outputs sharing k/n (hence b and r).
/// Non-converged runs are skipped; `target` bounds the corpus size.
inline std::vector<LabeledFrame> spherical_corpus(const AlgebraSpec& spec, std::size_t target, std::uint64_t seed) {
  std::vector<LabeledFrame> out;
  const std::string tag = spec.to_string();
  std::uint64_t stream = 0;
  auto next_seed = [&] { return split_seed(seed, stream++); };

  const Shape singles[] = {{2, 1}, {3, 2}, {4, 2}, {5, 3}, {6, 4}, {4, 3}, {5, 2}, {7, 4}, {6, 3}, {8, 6}, {9, 6}, {10, 4}};
  const std::vector<std::vector<Shape>> sums = {{{3, 2}, {3, 2}},         {{2, 1}, {4, 2}},         {{2, 1}, {2, 1}, {2, 1}},
                                                {{3, 2}, {6, 4}},         {{4, 3}, {4, 3}, {4, 3}}, {{5, 3}, {5, 3}},
                                                {{4, 2}, {4, 2}},         {{1, 1}, {1, 1}, {1, 1}}, {{3, 2}, {3, 2}, {3, 2}, {3, 2}},
                                                {{5, 2}, {5, 2}},         {{2, 2}, {3, 3}}};
  const double radius_choices[] = {0.0, 1.0};  // 0 -> default n/k
  std::size_t round = 0;
  while (out.size() < target) {
    const double rchoice = radius_choices[round % 2];
    for (const auto& [k, n] : singles) {
      if (out.size() >= target) break;
      const std::optional<double> radius = rchoice > 0 ? std::optional<double>(rchoice) : std::nullopt;
      if (auto f = spherical_frame(spec, k, n, next_seed(), radius)) {
        const double b = static_cast<double>(k) * (radius ? *radius : static_cast<double>(n) / k) / n;
        out.push_back({tag + " optimizer k=" + std::to_string(k) + " n=" + std::to_string(n), std::move(*f), b});
      }
    }
    for (const auto& shapes : sums) {
      if (out.size() >= target) break;
      // Parts share k/n, so a common radius gives a common constant.
      const double ratio = static_cast<double>(shapes.front().n) / static_cast<double>(shapes.front().k);
      const double radius = rchoice > 0 ? rchoice : ratio;
      const double b = radius / ratio;
      std::vector<Frame> parts;
      std::string label = "sum";
      bool ok = true;
      for (const auto& [k, n] : shapes) {
        auto f = spherical_frame(spec, k, n, next_seed(), radius);
        if (!f) {
          ok = false;
          break;
        }
        parts.push_back(std::move(*f));
        label += " (" + std::to_string(k) + "," + std::to_string(n) + ")";
      }
      if (!ok) continue;
      Rng rng(next_seed());
      out.push_back({tag + " " + label, disguise(direct_sum_frames(parts, b, 1e-7), rng), b});
    }
    ++round;
  }
  return out;
}

}  // namespace ncframe::corpus
