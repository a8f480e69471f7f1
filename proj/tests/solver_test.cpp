#include "oracles.hpp"

#include <sglasso/error.hpp>
#include <sglasso/solver.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace sglasso;

namespace {

SymMatrix diag_of(const SymMatrix& s, double lambda)
{
    SymMatrix t(s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j) t.set(j, j, 1.0 / (s(j, j) + lambda));
    return t;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace

TEST(Backend, NamesRoundTrip)
{
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) EXPECT_EQ(parse_backend(to_string(b)), b);
    EXPECT_THROW(parse_backend("newton"), InvalidArgument);
}

TEST(Objective, IdentityCase)
{
    const SymMatrix i4 = SymMatrix::identity(4);
    EXPECT_NEAR(objective(i4, i4, 0.0), 4.0, 1e-15);
}

TEST(Objective, ScalarCase)
{
    const std::vector<double> s{2}, t{1.0 / 3.0};
    EXPECT_NEAR(objective(SymMatrix::diagonal(t), SymMatrix::diagonal(s), 1.0), std::log(3.0) + 1.0, 1e-15);
}

TEST(Objective, MatchesCofactorOracle)
{
    Rng rng(31);
    const SymMatrix t = oracle::random_spd(4, rng);
    const SymMatrix s = oracle::random_spd(4, rng);
    EXPECT_NEAR(objective(t, s, 0.3), oracle::objective_direct(t, s, 0.3), 1e-10);
}

TEST(Objective, RejectsIndefinite)
{
    const std::vector<double> v{1, 2, 2, 1};
    const SymMatrix t = SymMatrix::from_row_major(2, v);
    EXPECT_THROW(objective(t, SymMatrix::identity(2), 0.1), NotPositiveDefinite);
}

TEST(GammaUpdate, Values)
{
    EXPECT_EQ(gamma_update(1, 0), 1);
    EXPECT_EQ(gamma_update(0.5, 0.5), 1);
    // 1-D grid check for s22 = 2, lambda = 0.3.
    double best = 0, bv = 1e300;
    for (double g = 1e-5; g < 2; g += 1e-6) {
        const double v = -std::log(g) + 2.3 * g;
        if (v < bv) {
            bv = v;
            best = g;
        }
    }
    EXPECT_NEAR(gamma_update(2, 0.3), best, 1e-5);
    EXPECT_THROW(gamma_update(0, 0), InvalidArgument);
}

TEST(DecoupledObjective, ZeroBetaAndOptimalGamma)
{
    Rng rng(32);
    const SymMatrix t = oracle::random_spd(4, rng);
    const SymMatrix s = oracle::random_spd(4, rng);
    const double lambda = 0.2;
    const PartitionView tv = partition_column(t, 3), sv = partition_column(s, 3);
    ColumnParams cp{std::vector<double>(3, 0.0), 0.7};
    const double d = sv.scalar22() + lambda;
    EXPECT_NEAR(decoupled_column_objective(cp, tv, sv, lambda), -std::log(0.7) + d * 0.7, 1e-14);
    cp.gamma = gamma_update(sv.scalar22(), lambda);
    EXPECT_NEAR(decoupled_column_objective(cp, tv, sv, lambda), 1 + std::log(d), 1e-14);
}

TEST(DecoupledObjective, DiffersFromObjectiveByConstant)
{
    Rng rng(33);
    const SymMatrix s = oracle::random_spd(5, rng);
    const double lambda = 0.15;
    SymMatrix t = oracle::random_spd(5, rng, 1.0);
    const std::size_t k = 1;
    const PartitionView base = partition_column(t, k);
    const SymMatrix inv11 = oracle::inverse(base.materialize_block11());
    std::vector<double> diffs;
    for (int r = 0; r < 20; ++r) {
        ColumnParams cp;
        cp.beta.resize(4);
        for (auto& b : cp.beta) b = rng.uniform(-0.4, 0.4);
        cp.gamma = rng.uniform(0.2, 2.0);
        double q = 0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) q += cp.beta[i] * inv11(i, j) * cp.beta[j];
        SymMatrix m = t;
        for (std::size_t i = 0; i < 4; ++i) m.set(k, base.source_index(i), cp.beta[i]);
        m.set(k, k, cp.gamma + q);
        diffs.push_back(oracle::objective_direct(m, s, lambda)
                        - decoupled_column_objective(cp, partition_column(m, k), partition_column(s, k), lambda));
    }
    for (double d : diffs) EXPECT_NEAR(d, diffs.front(), 1e-9);
}

TEST(ColumnParams, GammaIsSchurComplement)
{
    Rng rng(34);
    const SymMatrix t = oracle::random_spd(6, rng);
    const ColumnParams cp = column_params(partition_column(t, 0));
    // 1/gamma is the (0,0) entry of the inverse.
    EXPECT_NEAR(1.0 / cp.gamma, oracle::inverse(t)(0, 0), 1e-10);
}

TEST(ColdStart, IsDiagonalInverse)
{
    Rng rng(35);
    const SymMatrix s = oracle::random_spd(5, rng);
    EXPECT_EQ(cold_start(s, 0.4), diag_of(s, 0.4));
}

TEST(SweepColumn, DiagonalFixedPoint)
{
    const std::vector<double> v{1, 0.2, 0.1, 0.2, 2, -0.3, 0.1, -0.3, 1.5};
    const SymMatrix s = SymMatrix::from_row_major(3, v);
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) {
        SolverConfig c;
        c.lambda = 0.3;
        c.backend = b;
        SymMatrix t = diag_of(s, c.lambda);
        const SymMatrix before = t;
        for (std::size_t k = 0; k < 3; ++k) sweep_column(t, s, k, c);
        EXPECT_EQ(t, before) << to_string(b);
    }
}

TEST(SweepColumn, NeverIncreasesObjective)
{
    Rng rng(36);
    const SymMatrix s = oracle::random_spd(6, rng);
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) {
        SolverConfig c;
        c.lambda = 0.05;
        c.backend = b;
        SymMatrix t = cold_start(s, c.lambda);
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (std::size_t k = 0; k < 6; ++k) {
                const double before = objective(t, s, c.lambda);
                sweep_column(t, s, k, c);
                EXPECT_LE(objective(t, s, c.lambda), before + 1e-12 * std::abs(before));
            }
        }
    }
}

TEST(Solve, UnpenalizedTwoByTwoGivesInverse)
{
    const std::vector<double> v{1, 0.5, 0.5, 1};
    const SymMatrix s = SymMatrix::from_row_major(2, v);
    const SymMatrix inv = oracle::inverse(s);
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) {
        SolverConfig c;
        c.lambda = 0;
        c.backend = b;
        c.outer_tol = 1e-10;
        const Estimate e = solve(s, c);
        EXPECT_TRUE(e.trace.converged);
        EXPECT_LT(max_abs_diff(e.theta_hat, inv), 1e-6) << to_string(b);
    }
}

TEST(Solve, ScalarProblem)
{
    const std::vector<double> d{2};
    SolverConfig c;
    c.lambda = 1;
    const Estimate e = solve(SymMatrix::diagonal(d), c);
    EXPECT_EQ(e.theta_hat(0, 0), 1.0 / 3.0);
    EXPECT_TRUE(e.trace.converged);
}

TEST(Solve, LambdaMaxGivesExactDiagonal)
{
    const std::vector<double> v{1, -0.8, -0.8, 1};
    const SymMatrix s = SymMatrix::from_row_major(2, v);
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) {
        SolverConfig c;
        c.lambda = 0.8;
        c.backend = b;
        EXPECT_EQ(solve(s, c).theta_hat, diag_of(s, 0.8));
        c.lambda = 0.79;
        EXPECT_FALSE(solve(s, c).theta_hat.is_diagonal());
    }
}

TEST(Solve, MatchesBruteForceOnThreeVariables)
{
    Rng rng(37);
    const SymMatrix s = oracle::random_spd(3, rng, 0.3);
    SolverConfig c;
    c.lambda = 0.2;
    c.outer_tol = 1e-10;
    const Estimate e = solve(s, c);
    const double brute = oracle::brute_force_minimum(s, c.lambda, cold_start(s, c.lambda));
    EXPECT_NEAR(objective(e.theta_hat, s, c.lambda), brute, 1e-3);
    EXPECT_LE(check_stationarity(e.theta_hat, s, c.lambda), 1e-6);
}

TEST(Solve, TraceRecordsInitialPointAndDiagnostics)
{
    Rng rng(38);
    const SymMatrix s = oracle::random_spd(5, rng);
    SolverConfig c;
    c.lambda = 0.1;
    c.record_diagnostics = true;
    const Estimate e = solve(s, c);
    ASSERT_EQ(e.trace.records.size(), e.trace.sweeps + 1);
    EXPECT_TRUE(std::isnan(e.trace.records[0].rel_change));
    EXPECT_NEAR(e.trace.records[0].objective, objective(cold_start(s, 0.1), s, 0.1), 1e-14);
    for (const auto& r : e.trace.records) EXPECT_GT(r.min_eig, 0);

    c.max_sweeps = 0;
    const Estimate z = solve(s, c);
    EXPECT_EQ(z.trace.records.size(), 1u);
    EXPECT_FALSE(z.trace.converged);
    EXPECT_EQ(z.theta_hat, cold_start(s, 0.1));
}

TEST(Solve, WarmRestartFromSolutionIsImmediate)
{
    Rng rng(39);
    const SymMatrix s = oracle::random_spd(8, rng);
    SolverConfig c;
    c.lambda = 0.05;
    const Estimate cold = solve(s, c);
    const Estimate warm = solve(s, c, cold.theta_hat);
    EXPECT_TRUE(warm.trace.converged);
    EXPECT_LE(warm.trace.sweeps, 2u);
}

TEST(Solve, RejectsBadInputs)
{
    SolverConfig c;
    c.lambda = -0.1;
    EXPECT_THROW(solve(SymMatrix::identity(2), c), InvalidArgument);
    c.lambda = 0.1;
    EXPECT_THROW(solve(SymMatrix(), c), InvalidArgument);
    const std::vector<double> v{1, 2, 2, 1};
    const SymMatrix bad = SymMatrix::from_row_major(2, v);
    EXPECT_THROW(solve(SymMatrix::identity(2), c, bad), NotPositiveDefinite);
    EXPECT_THROW(solve(SymMatrix::identity(2), c, SymMatrix::identity(3)), DimensionMismatch);
    c.outer_tol = 0;
    EXPECT_THROW(solve(SymMatrix::identity(2), c), InvalidArgument);
}

TEST(Stationarity, KnownResiduals)
{
    const std::vector<double> s1{2}, t1{1.0 / 3.0};
    EXPECT_NEAR(check_stationarity(SymMatrix::diagonal(t1), SymMatrix::diagonal(s1), 1.0), 0.0, 1e-15);
    const SymMatrix i3 = SymMatrix::identity(3);
    EXPECT_NEAR(check_stationarity(i3, i3, 0.5), 0.5, 1e-15);
}

TEST(Stationarity, ConvergedSolveIsStationary)
{
    Rng rng(40);
    for (Backend b : {Backend::PrimalCd, Backend::DualQp}) {
        const SymMatrix s = oracle::random_spd(10, rng);
        SolverConfig c;
        c.lambda = 0.05;
        c.backend = b;
        c.outer_tol = 1e-6;
        const Estimate e = solve(s, c);
        EXPECT_LE(check_stationarity(e.theta_hat, s, c.lambda), 1e-4);
    }
}

TEST(DualWarmStart, ClipsToTheCurrentBox)
{
    DualWarmStart w(3);
    EXPECT_TRUE(w.start(1, 0.5).empty());
    w.store(1, {0.9, -0.2});
    EXPECT_EQ(w.start(1, 0.5), (std::vector<double>{0.5, -0.2}));
    EXPECT_EQ(w.start(1, 0.1), (std::vector<double>{0.1, -0.1}));
}

// Property: both backends reach the same estimate on random problems.
class BackendAgreement : public ::testing::TestWithParam<int>
{};

TEST_P(BackendAgreement, SameFixedPoint)
{
    Rng rng(static_cast<std::uint64_t>(500 + GetParam()));
    const std::size_t p = 3 + rng.below(10);
    const SymMatrix s = oracle::random_spd(p, rng);
    SolverConfig c;
    c.lambda = rng.uniform(0.01, 0.3);
    c.outer_tol = 1e-9;
    c.inner_tol = 1e-11;
    c.backend = Backend::PrimalCd;
    const Estimate a = solve(s, c);
    c.backend = Backend::DualQp;
    const Estimate b = solve(s, c);
    EXPECT_LT(max_abs_diff(a.theta_hat, b.theta_hat), 1e-6);
    EXPECT_NEAR(objective(a.theta_hat, s, c.lambda), objective(b.theta_hat, s, c.lambda), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Random, BackendAgreement, ::testing::Range(0, 12));
