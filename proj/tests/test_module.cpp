#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iterator>

#include "ncframe/frames.hpp"
#include "ncframe/module.hpp"

namespace ncframe {
namespace {

const Complex I(0.0, 1.0);

// Entry-wise product over A; independent of the flat-view multiply.
AMatrix entrywise_product(const AMatrix& m, const AMatrix& n) {
  AMatrix out(m.spec(), m.rows(), n.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) {
      auto acc = AlgebraElement::zero(m.spec());
      for (std::size_t l = 0; l < m.cols(); ++l) acc = acc + m.entry(i, l) * n.entry(l, j);
      out.set_entry(i, j, acc);
    }
  return out;
}

double max_flat_diff(const AMatrix& a, const AMatrix& b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.flat().size(); ++j) out = std::max(out, (a.flat(j) - b.flat(j)).cwiseAbs().maxCoeff());
  return out;
}

TEST(InnerProduct, StandardBasisIsOrthonormal) {
  const AlgebraSpec spec{2, 1};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const auto ip = inner_product(basis_vector(spec, 3, i), basis_vector(spec, 3, j));
      EXPECT_EQ(ip, i == j ? AlgebraElement::identity(spec) : AlgebraElement::zero(spec));
    }
}

TEST(InnerProduct, ZeroVector) {
  const ModuleVector zero(AlgebraSpec{2}, 3, 1);
  EXPECT_EQ(inner_product(zero, zero), AlgebraElement::zero(AlgebraSpec{2}));
}

TEST(InnerProduct, ConjugateLinearInFirstArgument) {
  // oracle: conj(v1) w1 + conj(v2) w2 with v = (1, i), w = (i, 1)
  const Complex v[] = {1.0, I}, w[] = {I, 1.0};
  const Complex expect = std::conj(v[0]) * w[0] + std::conj(v[1]) * w[1];
  ASSERT_EQ(expect, Complex(0.0, 0.0));
  const auto spec = AlgebraSpec::scalar();
  ModuleVector vv(spec, 2, 1), ww(spec, 2, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    vv.set_entry(i, 0, AlgebraElement::scalar(spec, v[i]));
    ww.set_entry(i, 0, AlgebraElement::scalar(spec, w[i]));
  }
  EXPECT_LT(std::abs(inner_product(vv, ww).block(0)(0, 0) - expect), 1e-15);
  // <v, v> = 2 distinguishes the convention from the bilinear one (which gives 0)
  EXPECT_LT(std::abs(inner_product(vv, vv).block(0)(0, 0) - 2.0), 1e-15);
}

TEST(InnerProduct, LengthMismatch) {
  const AlgebraSpec spec{1};
  EXPECT_THROW(inner_product(ModuleVector(spec, 2, 1), ModuleVector(spec, 3, 1)), ShapeError);
}

TEST(InnerProduct, Properties) {
  Rng rng(11);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{1, 1}, AlgebraSpec{2, 1}}) {
    for (int t = 0; t < 250; ++t) {
      const auto v = AMatrix::random(spec, 3, 1, rng);
      const auto w = AMatrix::random(spec, 3, 1, rng);
      const auto a = AlgebraElement::random(spec, rng);
      const auto vv = inner_product(v, v);
      const auto ww = inner_product(w, w);
      const auto vw = inner_product(v, w);
      EXPECT_TRUE(elem_is_positive(vv, 1e-10));
      EXPECT_LT(elem_norm(elem_adjoint(vw) - inner_product(w, v)), 1e-12);
      EXPECT_LT(elem_norm(inner_product(v, right_multiply(w, a)) - vw * a), 1e-10 * std::max(1.0, elem_norm(vw * a)));
      const double lhs = elem_norm(vw) * elem_norm(vw);
      EXPECT_LE(lhs, elem_norm(vv) * elem_norm(ww) + 1e-9);
    }
  }
}

TEST(Matmul, Identity) {
  Rng rng(12);
  const auto m = AMatrix::random(AlgebraSpec{2, 1}, 3, 4, rng);
  EXPECT_LT(max_flat_diff(m * AMatrix::identity(m.spec(), 4), m), 1e-15);
}

TEST(Matmul, WTimesWStarIsIdentity) {
  const AlgebraSpec spec{2};
  const auto w = w_matrix(spec, 3, 2);
  EXPECT_EQ(w * adjoint_matrix(w), AMatrix::identity(spec, 2));
}

TEST(Matmul, AgreesWithEntrywiseProduct) {
  Rng rng(13);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{2, 1}}) {
    const auto m = AMatrix::random(spec, 3, 4, rng);
    const auto n = AMatrix::random(spec, 4, 2, rng);
    EXPECT_LT(max_flat_diff(matmul(m, n), entrywise_product(m, n)), 1e-12);
  }
}

TEST(Matmul, ShapeErrors) {
  const AlgebraSpec spec{1};
  EXPECT_THROW(AMatrix(spec, 2, 3) * AMatrix(spec, 2, 3), ShapeError);
  EXPECT_THROW(AMatrix(spec, 2, 2) * AMatrix(AlgebraSpec{2}, 2, 2), ShapeError);
}

TEST(AdjointMatrix, Examples) {
  Rng rng(14);
  const auto m = AMatrix::random(AlgebraSpec{2, 1}, 2, 3, rng);
  EXPECT_EQ(adjoint_matrix(adjoint_matrix(m)), m);
  EXPECT_EQ(adjoint_matrix(AMatrix::identity(m.spec(), 3)), AMatrix::identity(m.spec(), 3));
  const auto ms = adjoint_matrix(m);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(ms.entry(i, j), elem_adjoint(m.entry(j, i)));
  for (std::size_t j = 0; j < m.flat().size(); ++j) EXPECT_EQ(flatten(ms)[j], CMatrix(flatten(m)[j].adjoint()));
}

TEST(Flatten, IdentityOverM2) {
  const auto view = flatten(AMatrix::identity(AlgebraSpec{2}, 2));
  ASSERT_EQ(view.size(), 1u);
  EXPECT_EQ(view[0], CMatrix::Identity(4, 4));
}

TEST(Flatten, RoundTripAndInterleaving) {
  Rng rng(15);
  const auto m = AMatrix::random(AlgebraSpec{2, 3}, 2, 3, rng);
  EXPECT_EQ(unflatten(flatten(m), 2, 3, m.spec()), m);
  // entry (1, 2), summand 1 (m = 3) sits at rows 3..5, cols 6..8
  EXPECT_EQ(CMatrix(flatten(m)[1].block(3, 6, 3, 3)), m.entry(1, 2).block(1));
  EXPECT_THROW(unflatten(flatten(m), 3, 2, m.spec()), ShapeError);
}

TEST(Flatten, RankOfW) {
  const AlgebraSpec spec{1, 2, 3};
  const auto view = flatten(w_matrix(spec, 5, 2));
  for (std::size_t j = 0; j < view.size(); ++j) {
    Eigen::JacobiSVD<CMatrix> svd(view[j]);
    svd.setThreshold(1e-12);
    EXPECT_EQ(svd.rank(), 2 * spec.dim(j));
  }
}

TEST(Flatten, NormIsMaxSpectralNorm) {
  Rng rng(16);
  const auto m = AMatrix::random(AlgebraSpec{1, 2}, 2, 2, rng);
  double expect = 0.0;
  for (const auto& blk : flatten(m)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(blk.adjoint() * blk);
    expect = std::max(expect, std::sqrt(eig.eigenvalues().maxCoeff()));
  }
  EXPECT_NEAR(matrix_norm(m), expect, 1e-12);
}

TEST(IsUnitary, Examples) {
  const AlgebraSpec scalar{1};
  EXPECT_TRUE(is_unitary(AMatrix::identity(AlgebraSpec{2, 1}, 3)));
  AMatrix phases(scalar, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) phases.set_entry(i, i, AlgebraElement::scalar(scalar, std::polar(1.0, 0.7 * i + 0.1)));
  EXPECT_TRUE(is_unitary(phases, 1e-14));
  // QR oracle
  Rng rng(17);
  const CMatrix g = gaussian_matrix(6, 6, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(6, 6);
  EXPECT_TRUE(is_unitary(unflatten({q}, 3, 3, AlgebraSpec{2}), 1e-12));
  EXPECT_FALSE(is_unitary(Complex(2.0) * AMatrix::identity(scalar, 2)));
  EXPECT_THROW(is_unitary(AMatrix(scalar, 2, 3)), ShapeError);
}

TEST(IsPartialIsometry, Examples) {
  const AlgebraSpec spec{2, 1};
  Rng rng(18);
  EXPECT_TRUE(is_partial_isometry(w_matrix(spec, 5, 3)));
  EXPECT_TRUE(is_partial_isometry(AMatrix::random_unitary(spec, 4, rng)));
  EXPECT_FALSE(is_partial_isometry(Complex(2.0) * AMatrix::identity(spec, 2)));
}

TEST(CompleteToUnitary, CanonicalCompletions) {
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2, 1}}) {
    EXPECT_EQ(complete_to_unitary(w_matrix(spec, 5, 2)), AMatrix::identity(spec, 5));
  }
  AMatrix row(AlgebraSpec{1}, 1, 2);
  row.set_entry(0, 0, AlgebraElement::identity(AlgebraSpec{1}));
  EXPECT_EQ(complete_to_unitary(row), AMatrix::identity(AlgebraSpec{1}, 2));
}

TEST(CompleteToUnitary, RandomCoisometries) {
  Rng rng(19);
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{1, 1}, AlgebraSpec{2, 1}}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::size_t k = n + 2;
      const auto u0 = AMatrix::random_unitary(spec, k, rng);
      std::vector<std::size_t> all(k);
      std::iota(all.begin(), all.end(), 0);
      // first n rows of u0
      const auto m = adjoint_matrix(adjoint_matrix(u0).select_columns(std::vector<std::size_t>(all.begin(), all.begin() + n)));
      const auto u = complete_to_unitary(m);
      EXPECT_TRUE(is_unitary(u, 1e-10));
      const auto top = adjoint_matrix(adjoint_matrix(u).select_columns(std::vector<std::size_t>(all.begin(), all.begin() + n)));
      EXPECT_LT(matrix_norm(top - m), 1e-8);
      // phase convention on the completed rows
      for (const auto& blk : u.flat()) {
        const auto first_completed = static_cast<Eigen::Index>(n) * (blk.rows() / static_cast<Eigen::Index>(k));
        for (Eigen::Index r = first_completed; r < blk.rows(); ++r) {
          Eigen::Index c = 0;
          while (std::abs(blk(r, c)) <= 1e-9) ++c;
          EXPECT_GT(blk(r, c).real(), 0.0);
          EXPECT_LT(std::abs(blk(r, c).imag()), 1e-12);
        }
      }
    }
  }
}

TEST(CompleteToUnitary, Deterministic) {
  Rng rng(20);
  const auto u0 = AMatrix::random_unitary(AlgebraSpec{2}, 4, rng);
  const auto m = adjoint_matrix(adjoint_matrix(u0).select_columns({0, 1}));
  EXPECT_EQ(complete_to_unitary(m), complete_to_unitary(m));
}

TEST(CompleteToUnitary, SnapsNearCoisometry) {
  const AlgebraSpec spec{2, 1};
  Rng rng(31);
  const auto exact = AMatrix::random_unitary(spec, 5, rng);
  AMatrix m = w_matrix(spec, 5, 3) * exact;
  m.flat(0)(0, 0) += 1e-9;
  m.flat(1)(2, 4) -= Complex(0, 1e-9);
  const auto u = complete_to_unitary(m, 1e-8);
  const auto id = AMatrix::identity(spec, 5);
  EXPECT_LT(matrix_norm(u * adjoint_matrix(u) - id), 1e-13);
  EXPECT_LT(matrix_norm(w_matrix(spec, 5, 3) * u - m), 2e-9);
}

TEST(CompleteToUnitary, RejectsNonCoisometry) {
  const AlgebraSpec spec{1};
  EXPECT_THROW(complete_to_unitary(Complex(2.0) * w_matrix(spec, 3, 2)), NotCoisometricError);
  EXPECT_THROW(complete_to_unitary(AMatrix(spec, 3, 2)), ShapeError);
}

TEST(CoordinateProjection, Examples) {
  const AlgebraSpec spec{2, 1};
  EXPECT_EQ(coordinate_projection(spec, 4, {0, 1, 2, 3}), AMatrix::identity(spec, 4));
  EXPECT_EQ(coordinate_projection(spec, 4, {}), AMatrix(spec, 4, 4));
  EXPECT_THROW(coordinate_projection(spec, 4, {4}), IndexError);
}

TEST(CoordinateProjection, ProductIsIntersection) {
  const AlgebraSpec spec{2};
  const std::size_t k = 5;
  for (unsigned a = 0; a < (1u << k); a += 3)
    for (unsigned b = 0; b < (1u << k); b += 5) {
      std::vector<std::size_t> ia, ib, iab;
      for (std::size_t i = 0; i < k; ++i) {
        if (a >> i & 1u) ia.push_back(i);
        if (b >> i & 1u) ib.push_back(i);
        if ((a & b) >> i & 1u) iab.push_back(i);
      }
      const auto qa = coordinate_projection(spec, k, ia);
      EXPECT_EQ(qa * coordinate_projection(spec, k, ib), coordinate_projection(spec, k, iab));
      EXPECT_EQ(qa * qa, qa);
      EXPECT_EQ(adjoint_matrix(qa), qa);
    }
}

}  // namespace
}  // namespace ncframe
