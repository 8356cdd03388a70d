#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jbd;
using jbd::testing::diag_pair;

namespace {

CsrMatrix random_sparse(Index rows, Index cols, std::uint64_t seed) {
    Matrix d = uniform_matrix(rows, cols, seed);
    // drop roughly half the entries
    const Matrix mask = uniform_matrix(rows, cols, seed + 1);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (mask(i, j) < 0.0) d(i, j) = 0.0;
    return CsrMatrix::from_dense(d);
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::NoConvergence;
}

}  // namespace

TEST(Csr, ConstructorValidates) {
    EXPECT_NO_THROW(CsrMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
    EXPECT_EQ(code_of([] { CsrMatrix(2, 2, {0, 1}, {0}, {1.0}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(2, 2, {0, 2, 1}, {0, 1}, {1.0, 2.0}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 2.0}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(1, 2, {0, 2}, {0, 0}, {1.0, 2.0}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(1, 2, {0, 1}, {2}, {1.0}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(1, 2, {0, 1}, {0}, {NAN}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { CsrMatrix(1, 2, {1, 1}, {0}, {1.0}); }), ErrorCode::InvalidInput);
}

TEST(Csr, TripletsSumDuplicates) {
    const CsrMatrix m = CsrMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 0, 2.0}, {1, 2, 0.5}, {1, 0, -1.0}});
    EXPECT_EQ(m.nnz(), 3);
    const Matrix d = m.to_dense();
    EXPECT_EQ(d(0, 0), 2.0);
    EXPECT_EQ(d(1, 0), -1.0);
    EXPECT_EQ(d(1, 2), 1.5);
    EXPECT_THROW(CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), Error);
}

TEST(Spmv, IdentityAndZero) {
    const Vector x = (Vector(3) << 1.0, 2.0, 3.0).finished();
    EXPECT_EQ(spmv(CsrMatrix::identity(3), x), x);
    EXPECT_EQ(spmv_t(CsrMatrix::identity(3), x), x);
    EXPECT_EQ(spmv(CsrMatrix::zero(4, 3), x), Vector::Zero(4));
    EXPECT_EQ(spmv_t(CsrMatrix::zero(3, 4), x), Vector::Zero(4));
}

TEST(Spmv, RandomAgainstDense) {
    const CsrMatrix m = random_sparse(7, 5, 3);
    const Matrix d = m.to_dense();
    const Vector x = uniform_matrix(5, 1, 4).col(0);
    const Vector y = uniform_matrix(7, 1, 5).col(0);
    const double nm = two_norm(d);
    EXPECT_LE((spmv(m, x) - d * x).norm(), 1e-14 * nm * x.norm());
    EXPECT_LE((spmv_t(m, y) - d.transpose() * y).norm(), 1e-14 * nm * y.norm());
}

TEST(Spmv, DimensionMismatch) {
    EXPECT_THROW(spmv(CsrMatrix::identity(3), Vector::Ones(2)), Error);
    EXPECT_THROW(spmv_t(CsrMatrix::identity(3), Vector::Ones(4)), Error);
}

TEST(StackedPairTest, Validation) {
    EXPECT_THROW(StackedPair(CsrMatrix::identity(2), CsrMatrix::identity(3)), Error);
    EXPECT_THROW(StackedPair(CsrMatrix::zero(1, 3), CsrMatrix::zero(1, 3)), Error);
    StackedPair ok(CsrMatrix::zero(2, 3), CsrMatrix::zero(1, 3));
    EXPECT_EQ(ok.stacked_rows(), 3);
    EXPECT_FALSE(ok.norm_estimate().has_value());
    EXPECT_THROW(ok.set_norm_estimate(-1.0), Error);
}

TEST(PairApply, IdentityPair) {
    StackedPair pair(CsrMatrix::identity(2), CsrMatrix::identity(2));
    const Vector y = pair_apply(pair, Vector::Unit(2, 0));
    EXPECT_EQ(y, (Vector(4) << 1.0, 0.0, 1.0, 0.0).finished());
    EXPECT_EQ(pair_apply(pair, Vector::Zero(2)), Vector::Zero(4));
    EXPECT_EQ(pair_apply_t(pair, y), (Vector(2) << 2.0, 0.0).finished());
    EXPECT_EQ(pair_apply_t(pair, Vector::Zero(4)), Vector::Zero(2));
    EXPECT_THROW(pair_apply(pair, Vector::Ones(3)), Error);
    EXPECT_THROW(pair_apply_t(pair, Vector::Ones(3)), Error);
}

TEST(PairApply, RandomAgainstDenseAndAdjoint) {
    StackedPair pair(random_sparse(6, 5, 20), random_sparse(4, 5, 22));
    const Matrix c = pair.to_dense();
    const double nc = two_norm(c);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Vector x = uniform_matrix(5, 1, 40 + s).col(0);
        const Vector y = uniform_matrix(10, 1, 60 + s).col(0);
        EXPECT_LE((pair_apply(pair, x) - c * x).norm(), 1e-14 * nc * x.norm());
        EXPECT_LE((pair_apply_t(pair, y) - c.transpose() * y).norm(), 1e-14 * nc * y.norm());
        EXPECT_LE(std::abs(pair_apply(pair, x).dot(y) - x.dot(pair_apply_t(pair, y))), 1e-13 * nc * x.norm() * y.norm());
    }
}

TEST(NormEstimate, KnownSpectra) {
    StackedPair twice(CsrMatrix::identity(2, 2.0), CsrMatrix::zero(2, 2));
    EXPECT_NEAR(estimate_two_norm(twice), 2.0, 2e-3);
    ASSERT_TRUE(twice.norm_estimate().has_value());
    EXPECT_EQ(*twice.norm_estimate(), estimate_two_norm(twice));

    StackedPair d = diag_pair({3.0, 1.0}, {1.0, 1.0});
    EXPECT_NEAR(estimate_two_norm(d), std::sqrt(10.0), 1e-3 * std::sqrt(10.0));
}

TEST(NormEstimate, GeneratedPairSmall) {
    // Small n keeps the top of the spectrum well separated; for large n the
    // fixed 1e-3 Rayleigh stopping rule leaves a bias near 1%.
    GeneratedPair gp = gen_a1l1(4, 10.0);
    EXPECT_NEAR(estimate_two_norm(gp.pair), 10.0, 1e-3 * 10.0);
}

TEST(NormEstimate, ZeroOperator) {
    StackedPair z(CsrMatrix::zero(2, 2), CsrMatrix::zero(1, 2));
    try {
        estimate_two_norm(z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
}

TEST(NormEstimate, StartOrthogonalToTopVector) {
    // The all-ones start is orthogonal to the dominant direction here, so the
    // first Rayleigh quotient is zero and the perturbed restart must kick in.
    Matrix a(2, 2);
    a << 1.0, -1.0, 0.0, 0.0;
    StackedPair pair(CsrMatrix::from_dense(a), CsrMatrix::zero(1, 2));
    EXPECT_NEAR(power_iteration_two_norm(pair), std::sqrt(2.0), 1e-3 * std::sqrt(2.0));
}

TEST(NormEstimate, RandomPairsLowerBound) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        StackedPair pair = gen_random_pair(12 + seed % 5, 9, 8, seed);
        const double exact = two_norm(pair.to_dense());
        const double est = power_iteration_two_norm(pair);
        EXPECT_LE(est, exact * (1.0 + 1e-14));
        EXPECT_GE(est, exact * (1.0 - 5e-3));
    }
}
