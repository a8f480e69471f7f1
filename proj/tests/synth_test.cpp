#include "oracles.hpp"

#include <sglasso/error.hpp>
#include <sglasso/evaluation.hpp>
#include <sglasso/synth.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace sglasso;

TEST(SparsePrecision, ZeroShareAndDefiniteness)
{
    const GroundTruth gt = gen_sparse_precision(200, 0.7, 1);
    EXPECT_GT(min_eigenvalue(gt.theta_star), 0);
    EXPECT_GE(gt.zero_fraction, 0.68);
    EXPECT_LE(gt.zero_fraction, 0.72);
    EXPECT_EQ(gt.edges, support_edges(gt.theta_star, 0.0));
}

TEST(SparsePrecision, MagnitudesAndDiagonal)
{
    const GroundTruth gt = gen_sparse_precision(40, 0.6, 5);
    const SymMatrix& t = gt.theta_star;
    for (const auto& e : gt.edges) {
        const double a = std::abs(t(e.i, e.j));
        EXPECT_GE(a, 0.2);
        EXPECT_LE(a, 0.6);
    }
    // Constant diagonal, shifted one unit past the most negative eigenvalue.
    SymMatrix off = t;
    for (std::size_t i = 0; i < 40; ++i) off.set(i, i, 0.0);
    const double shift = -oracle::jacobi_eigenvalues(off).front() + kEigenShiftMargin;
    for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(t(i, i), shift, 1e-7);
    EXPECT_NEAR(oracle::jacobi_eigenvalues(t).front(), kEigenShiftMargin, 1e-7);
}

TEST(SparsePrecision, DominanceRule)
{
    const GroundTruth gt = gen_sparse_precision(30, 0.7, 9, DiagonalRule::Dominance);
    for (std::size_t i = 0; i < 30; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < 30; ++j)
            if (j != i) s += std::abs(gt.theta_star(i, j));
        EXPECT_NEAR(gt.theta_star(i, i), s + kDominanceMargin, 1e-14);
    }
    EXPECT_TRUE(is_spd(gt.theta_star));
    EXPECT_EQ(gen_sparse_precision(30, 0.7, 9, DiagonalRule::Dominance).edges,
              gen_sparse_precision(30, 0.7, 9, DiagonalRule::EigenShift).edges);
}

TEST(SparsePrecision, EmptyGraphAndDeterminism)
{
    const GroundTruth empty = gen_sparse_precision(10, 1.0, 3);
    EXPECT_TRUE(empty.theta_star.is_diagonal());
    EXPECT_TRUE(empty.edges.empty());
    EXPECT_EQ(empty.zero_fraction, 1.0);
    EXPECT_TRUE(is_spd(empty.theta_star));

    EXPECT_EQ(gen_sparse_precision(25, 0.7, 4).theta_star, gen_sparse_precision(25, 0.7, 4).theta_star);
    EXPECT_NE(gen_sparse_precision(25, 0.7, 4).theta_star, gen_sparse_precision(25, 0.7, 5).theta_star);
}

TEST(SparsePrecision, RejectsBadArguments)
{
    EXPECT_THROW(gen_sparse_precision(1, 0.7, 1), InvalidArgument);
    EXPECT_THROW(gen_sparse_precision(10, 1.2, 1), InvalidArgument);
    EXPECT_THROW(gen_sparse_precision(10, -0.1, 1), InvalidArgument);
}

TEST(Ar2, BandValues)
{
    const GroundTruth gt = gen_ar2_precision(3);
    const std::vector<double> expect{1, .5, .25, .5, 1, .5, .25, .5, 1};
    EXPECT_EQ(gt.theta_star, SymMatrix::from_row_major(3, expect));
    EXPECT_THROW(gen_ar2_precision(2), InvalidArgument);
}

TEST(Ar2, SpectrumApproachesSymbolMinimum)
{
    const double lo200 = min_eigenvalue(gen_ar2_precision(200).theta_star);
    EXPECT_GT(lo200, 0.25);
    EXPECT_LT(lo200, 0.30);
    const SymMatrix t50 = gen_ar2_precision(50).theta_star;
    EXPECT_TRUE(is_spd(t50));
    EXPECT_NEAR(min_eigenvalue(t50), oracle::jacobi_eigenvalues(t50).front(), 1e-6);
}

TEST(SampleGaussian, LawOfLargeNumbers)
{
    GroundTruth gt;
    gt.theta_star = SymMatrix::identity(3);
    gt.edges = EdgeSet(3);
    const Dataset d = sample_gaussian(gt, 100000, 11);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(d.S(i, i), 1.0, 0.05);
        for (std::size_t j = i + 1; j < 3; ++j) EXPECT_LE(std::abs(d.S(i, j)), 0.05);
    }
}

TEST(SampleGaussian, CovarianceMatchesTruth)
{
    const GroundTruth gt = gen_ar2_precision(4);
    const Dataset d = sample_gaussian(gt, 200000, 12);
    const SymMatrix sigma = oracle::inverse(gt.theta_star);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(d.S(i, j), sigma(i, j), 0.05);
}

TEST(SampleGaussian, FewSamplesGiveLowRank)
{
    const GroundTruth gt = gen_sparse_precision(5, 0.5, 13);
    const Dataset d = sample_gaussian(gt, 2, 14);
    const auto ev = oracle::jacobi_eigenvalues(d.S);
    int positive = 0;
    for (double e : ev) {
        EXPECT_GT(e, -1e-12);
        if (e > 1e-10) ++positive;
    }
    EXPECT_LE(positive, 2);
}

TEST(SampleGaussian, Deterministic)
{
    const GroundTruth gt = gen_sparse_precision(6, 0.5, 15);
    EXPECT_EQ(sample_gaussian(gt, 20, 1).Y.values, sample_gaussian(gt, 20, 1).Y.values);
    EXPECT_NE(sample_gaussian(gt, 20, 1).Y.values, sample_gaussian(gt, 20, 2).Y.values);
}

TEST(SampleCovariance, IsGramOverN)
{
    DenseMatrix y{2, 2, {1, 2, 3, 4}};
    const SymMatrix s = sample_covariance(y);
    EXPECT_EQ(s(0, 0), 5.0);
    EXPECT_EQ(s(0, 1), 7.0);
    EXPECT_EQ(s(1, 1), 10.0);
}

TEST(LambdaMax, Values)
{
    EXPECT_EQ(lambda_max(SymMatrix::identity(3)), 0.0);
    const std::vector<double> a{1, -0.8, -0.8, 1};
    EXPECT_EQ(lambda_max(SymMatrix::from_row_major(2, a)), 0.8);
    const std::vector<double> b{2, 0.3, -0.5, 0.3, 1, 0.1, -0.5, 0.1, 1};
    EXPECT_EQ(lambda_max(SymMatrix::from_row_major(3, b)), 0.5);
}

TEST(LambdaMax, IsTheDiagonalThreshold)
{
    const std::vector<double> a{1, -0.8, -0.8, 1};
    const SymMatrix s = SymMatrix::from_row_major(2, a);
    SolverConfig c;
    c.lambda = 0.8 + 1e-9;
    EXPECT_TRUE(solve(s, c).theta_hat.is_diagonal());
}

TEST(LambdaGrid, Formula)
{
    const auto g = lambda_grid(1.0);
    ASSERT_EQ(g.size(), 20u);
    EXPECT_NEAR(g[0], 0.72, 1e-15);
    EXPECT_NEAR(g[1], 0.576, 1e-15);
    EXPECT_NEAR(g[19], std::pow(0.8, 20) * 0.9, 1e-15);
    EXPECT_NEAR(g[19], 0.010376, 1e-6);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], 0.8, 1e-14);
    EXPECT_THROW(lambda_grid(0.0), InvalidArgument);
}

TEST(LambdaGrid, EveryValueLeavesOffDiagonalSupport)
{
    const GroundTruth gt = gen_sparse_precision(15, 0.7, 16);
    const Dataset d = sample_gaussian(gt, 60, 17);
    const auto g = lambda_grid(lambda_max(d.S));
    SolverConfig c;
    c.lambda = g.front();
    EXPECT_FALSE(solve(d.S, c).theta_hat.is_diagonal());
}
