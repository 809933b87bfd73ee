#include <gtest/gtest.h>

#include <cmath>

#include "ncframe/corpus.hpp"
#include "ncframe/optimize.hpp"

namespace ncframe {
namespace {

using corpus::mercedes_benz_frame;

// Central differences on every real and imaginary coordinate of the flat view.
AMatrix finite_difference_gradient(const Frame& f, double h) {
  FlatView view;
  for (std::size_t j = 0; j < f.matrix.flat().size(); ++j) {
    const auto& x = f.matrix.flat(j);
    CMatrix grad(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        double parts[2];
        for (int p = 0; p < 2; ++p) {
          const Complex step = p == 0 ? Complex(h, 0.0) : Complex(0.0, h);
          Frame plus = f, minus = f;
          plus.matrix.flat(j)(r, c) += step;
          minus.matrix.flat(j)(r, c) -= step;
          parts[p] = (frame_potential(plus) - frame_potential(minus)) / (2.0 * h);
        }
        grad(r, c) = {parts[0], parts[1]};
      }
    view.push_back(std::move(grad));
  }
  return unflatten(std::move(view), f.n(), f.k(), f.spec());
}

double flat_fro(const AMatrix& m) {
  double s = 0.0;
  for (const auto& blk : m.flat()) s += blk.squaredNorm();
  return std::sqrt(s);
}

TEST(FramePotential, Examples) {
  EXPECT_NEAR(frame_potential(corpus::orthonormal_basis_frame(AlgebraSpec{1}, 5)), 5.0, 1e-15);
  // oracle: 3 unit diagonals and 6 off-diagonals of modulus 1/2
  const double oracle = 3.0 * 1.0 + 6.0 * 0.25;
  const auto mb = mercedes_benz_frame();
  EXPECT_NEAR(frame_potential(mb), oracle, 1e-14);
  EXPECT_NEAR(potential_lower_bound(mb), 9.0 / 2.0, 1e-14);
  EXPECT_EQ(frame_potential(Frame(AMatrix(AlgebraSpec{2}, 2, 3))), 0.0);
}

TEST(PotentialGradient, MatchesFiniteDifferences) {
  Rng rng(40);
  const AlgebraSpec specs[] = {{1}, {2}, {1, 1}};
  for (int t = 0; t < 50; ++t) {
    const auto& spec = specs[t % 3];
    const std::size_t n = 1 + t % 3, k = n + 1 + t % 2;
    const Frame f(AMatrix::random(spec, n, k, rng));
    const auto analytic = potential_gradient(f);
    const auto numeric = finite_difference_gradient(f, 1e-5);
    EXPECT_LT(flat_fro(analytic - numeric) / flat_fro(analytic), 1e-6) << "instance " << t;
  }
}

TEST(PotentialGradient, ZeroFrame) {
  const Frame zero(AMatrix(AlgebraSpec{2, 1}, 2, 3));
  EXPECT_EQ(flat_fro(potential_gradient(zero)), 0.0);
}

TEST(PotentialGradient, StationaryAtTightSphericalFrames) {
  const auto mb = mercedes_benz_frame(AlgebraSpec{2});
  EXPECT_LE(flat_fro(project_tangent(mb, potential_gradient(mb), 1.0)), 1e-6);
  OptimizerConfig config;
  config.seed = 3;
  const auto trace = minimize(AlgebraSpec{2}, 4, 2, config);
  ASSERT_TRUE(trace.converged);
  EXPECT_LE(flat_fro(project_tangent(trace.frame, potential_gradient(trace.frame), trace.radius)), 1e-6);
}

TEST(RetractSpherical, Examples) {
  const auto mb = mercedes_benz_frame(AlgebraSpec{2});
  EXPECT_LT(matrix_norm(retract_spherical(mb, 1.0).matrix - mb.matrix), 1e-12);

  AMatrix m(AlgebraSpec{1}, 2, 1);
  m.flat(0)(0, 0) = 2.0;
  const auto halved = retract_spherical(Frame(m), 1.0);
  EXPECT_NEAR(std::abs(halved.matrix.flat(0)(0, 0) - 1.0), 0.0, 1e-15);

  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto out = retract_spherical(Frame(AMatrix::random(AlgebraSpec{2}, 3, 4, rng)), 0.7);
    const auto sph = is_spherical(out, 1e-10);
    EXPECT_TRUE(sph.spherical);
    EXPECT_NEAR(sph.radius, 0.7, 1e-10);
  }
}

TEST(RetractSpherical, DegenerateColumn) {
  AMatrix m(AlgebraSpec{2}, 2, 2);
  m.flat(0).setIdentity();
  m.flat(0)(3, 3) = 0.0;  // column 2 has rank 1 over M_2
  try {
    retract_spherical(Frame(m), 1.0);
    FAIL() << "expected DegenerateColumnError";
  } catch (const DegenerateColumnError& e) {
    EXPECT_EQ(e.column, 1u);
  }
}

TEST(Minimize, ThreeVectorsInThePlane) {
  OptimizerConfig config;
  config.seed = 1;
  const auto trace = minimize(AlgebraSpec{1}, 3, 2, config);
  ASSERT_TRUE(trace.converged);
  const auto report = check_tight(trace.frame, config.tight_tol);
  EXPECT_TRUE(report.is_tight);
  EXPECT_NEAR(report.b, 1.0, 1e-8);
  // bound k^2 r^2 / n with r = n / k
  const double r = 2.0 / 3.0;
  EXPECT_NEAR(frame_potential(trace.frame), 9.0 * r * r / 2.0, 1e-6);
  EXPECT_TRUE(is_spherical(trace.frame, 1e-10).spherical);
}

TEST(Minimize, SquareCaseGivesScaledUnitary) {
  OptimizerConfig config;
  config.seed = 2;
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}}) {
    const auto trace = minimize(spec, 3, 3, config);
    ASSERT_TRUE(trace.converged);
    EXPECT_NEAR(trace.radius, 1.0, 1e-15);
    EXPECT_TRUE(is_unitary(trace.frame.matrix, 1e-7));
  }
}

TEST(Minimize, DeterministicAndMonotone) {
  OptimizerConfig config;
  config.seed = 77;
  const auto a = minimize(AlgebraSpec{2}, 4, 2, config);
  const auto b = minimize(AlgebraSpec{2}, 4, 2, config);
  ASSERT_EQ(a.iterates.size(), b.iterates.size());
  for (std::size_t i = 0; i < a.iterates.size(); ++i) {
    EXPECT_EQ(a.iterates[i].potential, b.iterates[i].potential);
    EXPECT_EQ(a.iterates[i].residual, b.iterates[i].residual);
  }
  EXPECT_EQ(a.frame, b.frame);
  for (std::size_t i = 1; i < a.iterates.size(); ++i) {
    EXPECT_LT(a.iterates[i].excess, a.iterates[i - 1].excess);
    EXPECT_LE(a.iterates[i].potential, a.iterates[i - 1].potential + 1e-12);
  }
}

TEST(Minimize, IterationBudget) {
  OptimizerConfig config;
  config.max_iters = 1;
  const auto trace = minimize(AlgebraSpec{1}, 5, 3, config);
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(trace.iterates.size(), 1u);
  EXPECT_THROW(minimize(AlgebraSpec{1}, 2, 3, OptimizerConfig{}), ShapeError);
}

TEST(Minimize, CustomRadius) {
  OptimizerConfig config;
  config.radius = 2.0;
  config.seed = 5;
  const auto trace = minimize(AlgebraSpec{1, 1}, 5, 3, config);
  ASSERT_TRUE(trace.converged);
  // strict-spherical and tight: b = k r / n
  EXPECT_NEAR(check_tight(trace.frame).b, 5.0 * 2.0 / 3.0, 1e-9);
}

TEST(PotentialProperties, LowerBoundAndTightness) {
  Rng rng(42);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{2, 1}}) {
    for (int t = 0; t < 20; ++t) {
      const Frame f(AMatrix::random(spec, 2, 4, rng));
      EXPECT_GE(frame_potential(f), potential_lower_bound(f) - 1e-9);
      EXPECT_FALSE(check_tight(f).is_tight);
      EXPECT_GT(frame_potential(f) - potential_lower_bound(f), 1e-6);
      const auto tight = random_tight_frame(spec, 4, 2, 1.3, static_cast<std::uint64_t>(t));
      EXPECT_NEAR(frame_potential(tight), potential_lower_bound(tight), 1e-9);
    }
  }
}

}  // namespace
}  // namespace ncframe
