#include <gtest/gtest.h>

#include <cmath>

#include "elastica/errors.hpp"
#include "elastica/linalg.hpp"
#include "elastica/random.hpp"
#include "support/oracles.hpp"

using namespace elastica;

TEST(SymMatrix, RejectsAsymmetricInput) {
    EXPECT_THROW(SymMatrix({{1.0, 2.0}, {2.5, 1.0}}), ValidationError);
    EXPECT_THROW(SymMatrix(Matrix(2, 3)), ValidationError);
    EXPECT_NO_THROW(SymMatrix({{1.0, 2.0}, {2.0, 1.0}}));
}

TEST(SymMatrix, SymmetrizeAveragesOffDiagonal) {
    const auto s = SymMatrix::symmetrize(Matrix{{1.0, 2.0}, {4.0, 5.0}});
    EXPECT_EQ(s(0, 1), 3.0);
    EXPECT_EQ(s(1, 0), 3.0);
    EXPECT_EQ(s(1, 1), 5.0);
}

TEST(SymEigen, Identity) {
    const auto eig = sym_eigen(SymMatrix::identity(2));
    EXPECT_EQ(eig.values[0], 1.0);
    EXPECT_EQ(eig.values[1], 1.0);
}

TEST(SymEigen, AlreadyDiagonalSortsDescending) {
    const auto eig = sym_eigen(SymMatrix({{1.0, 0.0}, {0.0, 2.0}}));
    EXPECT_EQ(eig.values[0], 2.0);
    EXPECT_EQ(eig.values[1], 1.0);
    // eigenvectors are the permuted identity up to sign
    EXPECT_EQ(std::abs(eig.vectors(1, 0)), 1.0);
    EXPECT_EQ(std::abs(eig.vectors(0, 1)), 1.0);
}

TEST(SymEigen, TwoByTwoCharacteristicPolynomial) {
    // lambda^2 - 4 lambda + 3 = 0
    const auto eig = sym_eigen(SymMatrix({{2.0, 1.0}, {1.0, 2.0}}));
    EXPECT_NEAR(eig.values[0], 3.0, 1e-14);
    EXPECT_NEAR(eig.values[1], 1.0, 1e-14);
}

TEST(SymEigen, ReconstructionPropertyOnRandomMatrices) {
    SplitMix64 rng(11);
    for (std::size_t d : {1u, 2u, 3u, 5u, 8u, 16u}) {
        for (int trial = 0; trial < 20; ++trial) {
            Matrix general(d, d);
            for (auto& v : general.data()) v = 4.0 * rng.uniform_open() - 2.0;
            const auto m = SymMatrix::symmetrize(general);
            const auto eig = sym_eigen(m);
            for (std::size_t k = 1; k < d; ++k) {
                EXPECT_GE(eig.values[k - 1], eig.values[k]);
            }
            const Matrix recon = eig.vectors * Matrix::diagonal(eig.values) * eig.vectors.transpose();
            EXPECT_LE((recon - m.matrix()).max_abs(), 1e-10 * m.matrix().max_abs()) << "d=" << d;
            const Matrix gram = eig.vectors.transpose() * eig.vectors;
            EXPECT_LE((gram - Matrix::identity(d)).max_abs(), 1e-12);
        }
    }
}

TEST(SymEigen, RepeatedEigenvaluesOfLargeProjection) {
    // I - (1/n) 1 1^T: one zero eigenvalue, the rest equal to one.
    const std::size_t n = 40;
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n);
    const auto eig = sym_eigen(SymMatrix(p));
    for (std::size_t k = 0; k + 1 < n; ++k) EXPECT_NEAR(eig.values[k], 1.0, 1e-12);
    EXPECT_NEAR(eig.values.back(), 0.0, 1e-12);
}

TEST(SymSolve, IdentityReturnsRhs) {
    const Matrix rhs{{1.5, -2.0}, {0.25, 7.0}};
    EXPECT_EQ(sym_solve(SymMatrix::identity(2), rhs), rhs);
}

TEST(SymSolve, DiagonalInverse) {
    const auto x = sym_solve(SymMatrix({{2.0, 0.0}, {0.0, 4.0}}), Matrix::identity(2));
    EXPECT_DOUBLE_EQ(x(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(x(1, 1), 0.25);
    EXPECT_EQ(x(0, 1), 0.0);
}

TEST(SymSolve, HandInverse) {
    // det = 3, inverse = (1/3) [[2, -1], [-1, 2]]
    const auto x = sym_solve(SymMatrix({{2.0, 1.0}, {1.0, 2.0}}), Matrix::identity(2));
    EXPECT_NEAR(x(0, 0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(x(0, 1), -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(x(1, 0), -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(x(1, 1), 2.0 / 3.0, 1e-15);
}

TEST(SymSolve, SingularMatrixCarriesCondition) {
    try {
        sym_solve(SymMatrix({{1.0, 1.0}, {1.0, 1.0}}), Matrix::identity(2));
        FAIL() << "expected SingularGramError";
    } catch (const SingularGramError& e) {
        EXPECT_GT(e.condition(), 1e12);
    }
    EXPECT_THROW(sym_solve(SymMatrix::zeros(3), Matrix::identity(3)), SingularGramError);
}

TEST(SymSolve, ResidualPropertyUpToConditionMillion) {
    SplitMix64 rng(5);
    for (std::size_t d : {2u, 3u, 6u, 10u}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix q = oracle::random_orthogonal(d, rng);
            std::vector<double> spectrum(d);
            for (std::size_t k = 0; k < d; ++k) {
                // log-uniform eigenvalues in [1e-6, 1]
                spectrum[k] = std::pow(10.0, -6.0 * static_cast<double>(k) / static_cast<double>(d - 1));
            }
            const auto m = SymMatrix::symmetrize(q * Matrix::diagonal(spectrum) * q.transpose());
            Matrix rhs(d, d);
            for (auto& v : rhs.data()) v = 2.0 * rng.uniform_open() - 1.0;
            const Matrix x = sym_solve(m, rhs);
            const Matrix back = m.matrix() * x;
            EXPECT_LE((back - rhs).max_abs(), 1e-8 * rhs.max_abs()) << "d=" << d;
        }
    }
}

TEST(SpectralNorm, LargestAbsoluteEigenvalue) {
    EXPECT_NEAR(spectral_norm(SymMatrix({{0.0, 1.0}, {1.0, 0.0}})), 1.0, 1e-15);
    EXPECT_NEAR(spectral_norm(SymMatrix({{-3.0, 0.0}, {0.0, 2.0}})), 3.0, 1e-15);
}
