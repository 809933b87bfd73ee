#include <gtest/gtest.h>

#include <cmath>

#include "ncframe/algebra.hpp"

namespace ncframe {
namespace {

const Complex I(0.0, 1.0);

AlgebraElement scalar_elem(Complex c) { return AlgebraElement::scalar(AlgebraSpec::scalar(), c); }

AlgebraElement m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix blk(2, 2);
  blk << a, b, c, d;
  return {AlgebraSpec{2}, {blk}};
}

TEST(AlgebraSpec, Dimensions) {
  AlgebraSpec spec{2, 1, 3};
  EXPECT_EQ(spec.summands(), 3u);
  EXPECT_EQ(spec.total_dim(), 4 + 1 + 9);
  EXPECT_EQ(spec.unit_trace(), 6);
  EXPECT_FALSE(spec.is_commutative());
  EXPECT_TRUE((AlgebraSpec{1, 1}).is_commutative());
}

TEST(AlgebraSpec, RejectsBadDims) {
  EXPECT_THROW(AlgebraSpec(std::vector<int>{}), ShapeError);
  EXPECT_THROW((AlgebraSpec{2, 0}), ShapeError);
}

TEST(AlgebraElement, RejectsNonconformingBlocks) {
  EXPECT_THROW(AlgebraElement(AlgebraSpec{2}, {CMatrix::Zero(3, 3)}), ShapeError);
  EXPECT_THROW(AlgebraElement(AlgebraSpec{2, 1}, {CMatrix::Zero(2, 2)}), ShapeError);
}

TEST(ElemAdd, Examples) {
  Rng rng(1);
  const auto a = AlgebraElement::random(AlgebraSpec{2, 1}, rng);
  EXPECT_EQ(a + AlgebraElement::zero(a.spec()), a);
  EXPECT_EQ(elem_norm(a + (-a)), 0.0);
  const auto sum = elem_add(scalar_elem({2, 3}), scalar_elem({1, -1}));
  EXPECT_EQ(sum.block(0)(0, 0), Complex(3, 2));
}

TEST(ElemAdd, SpecMismatch) {
  EXPECT_THROW(AlgebraElement::identity(AlgebraSpec{1}) + AlgebraElement::identity(AlgebraSpec{2}), ShapeError);
  EXPECT_THROW(AlgebraElement::identity(AlgebraSpec{1}) * AlgebraElement::identity(AlgebraSpec{1, 1}), ShapeError);
}

TEST(ElemMul, Examples) {
  Rng rng(2);
  const auto a = AlgebraElement::random(AlgebraSpec{3, 1}, rng);
  EXPECT_EQ(elem_mul(a, AlgebraElement::identity(a.spec())), a);
  const auto nil = m2(0, 1, 0, 0);
  EXPECT_EQ(elem_norm(nil * nil), 0.0);
}

TEST(ElemMul, AdjointReversesProducts) {
  Rng rng(3);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{3}, AlgebraSpec{2, 1}}) {
    for (int t = 0; t < 20; ++t) {
      const auto a = AlgebraElement::random(spec, rng);
      const auto b = AlgebraElement::random(spec, rng);
      const auto lhs = elem_adjoint(a * b);
      // blockwise oracle
      for (std::size_t j = 0; j < spec.summands(); ++j) {
        const CMatrix expect = b.block(j).adjoint() * a.block(j).adjoint();
        EXPECT_LT((lhs.block(j) - expect).norm(), 1e-12);
      }
    }
  }
}

TEST(ElemAdjoint, Examples) {
  EXPECT_EQ(elem_adjoint(scalar_elem({3, 4})).block(0)(0, 0), Complex(3, -4));
  const auto h = m2(2, {1, 1}, {1, -1}, 5);
  EXPECT_EQ(elem_adjoint(h), h);
}

TEST(ElemNorm, Examples) {
  EXPECT_DOUBLE_EQ(elem_norm(AlgebraElement::identity(AlgebraSpec{2, 3})), 1.0);
  EXPECT_NEAR(elem_norm(scalar_elem({3, 4})), 5.0, 1e-15);
  EXPECT_NEAR(elem_norm(m2(0, 2, 0, 0)), 2.0, 1e-15);
  // max over summands
  AlgebraElement a(AlgebraSpec{1, 1}, {CMatrix::Constant(1, 1, 2.0), CMatrix::Constant(1, 1, -7.0)});
  EXPECT_NEAR(elem_norm(a), 7.0, 1e-15);
}

TEST(ElemIsPositive, Examples) {
  Rng rng(4);
  EXPECT_TRUE(elem_is_positive(AlgebraElement::identity(AlgebraSpec{2, 1}), 1e-12));
  for (int t = 0; t < 50; ++t) {
    const auto a = AlgebraElement::random(AlgebraSpec{3, 2}, rng);
    EXPECT_TRUE(elem_is_positive(elem_adjoint(a) * a, 1e-10));
  }
  EXPECT_FALSE(elem_is_positive(scalar_elem(-1.0), 1e-9));
  EXPECT_FALSE(elem_is_positive(m2(1, 1, 0, 1), 1e-9));  // not Hermitian
  EXPECT_FALSE(elem_is_positive(m2(1, 2, 2, 1), 1e-9));  // eigenvalue -1
}

TEST(NormalizedTrace, Examples) {
  EXPECT_NEAR(std::abs(normalized_trace(AlgebraElement::identity(AlgebraSpec{3, 1, 2})) - 1.0), 0.0, 1e-15);
  AlgebraElement a(AlgebraSpec{1, 1}, {CMatrix::Constant(1, 1, 2.0), CMatrix::Constant(1, 1, 4.0)});
  EXPECT_NEAR(std::abs(normalized_trace(a) - 3.0), 0.0, 1e-15);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto x = AlgebraElement::random(AlgebraSpec{2, 3}, rng);
    const auto pos = elem_adjoint(x) * x;
    // oracle: sum of eigenvalues of each block
    double eig_sum = 0.0;
    for (const auto& blk : pos.blocks()) {
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(blk);
      eig_sum += eig.eigenvalues().sum();
    }
    EXPECT_NEAR(normalized_trace(pos).real(), eig_sum / 5.0, 1e-10);
    EXPECT_GE(normalized_trace(pos).real(), 0.0);
  }
}

TEST(CStarProperties, RandomElements) {
  Rng rng(6);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{3}, AlgebraSpec{1, 1}, AlgebraSpec{2, 1}}) {
    for (int t = 0; t < 200; ++t) {
      const auto a = AlgebraElement::random(spec, rng);
      const auto b = AlgebraElement::random(spec, rng);
      const double na = elem_norm(a);
      EXPECT_LE(std::abs(elem_norm(elem_adjoint(a) * a) - na * na), 1e-10 * std::max(1.0, na * na));
      EXPECT_LE(elem_norm(a * b), na * elem_norm(b) + 1e-10);
      EXPECT_EQ(elem_adjoint(elem_adjoint(a)), a);
      EXPECT_NEAR(elem_norm(elem_adjoint(a)), na, 1e-12 * std::max(1.0, na));
      EXPECT_LE(std::abs(normalized_trace(a * b) - normalized_trace(b * a)), 1e-10);
    }
  }
}

TEST(RandomElement, SeedDeterminism) {
  Rng r1(99), r2(99);
  EXPECT_EQ(AlgebraElement::random(AlgebraSpec{2, 1}, r1), AlgebraElement::random(AlgebraSpec{2, 1}, r2));
}

}  // namespace
}  // namespace ncframe
