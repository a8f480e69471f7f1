#include <sglasso/glasso.hpp>
#include <sglasso/error.hpp>
#include <sglasso/subproblem.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace sglasso {

GlassoResult glasso_solve(const SymMatrix& s, const SolverConfig& config)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    const double lam = config.lambda;
    validate_problem(s, lam);
    if (!(config.outer_tol > 0) || !(config.inner_tol > 0)) {
        throw InvalidArgument("tolerances must be positive");
    }
    const std::size_t p = s.dim();

    GlassoResult out;
    out.W = s;
    for (std::size_t j = 0; j < p; ++j) out.W.set(j, j, s(j, j) + lam);
    // W0 must factor; with lambda = 0 this rejects a singular S up front.
    out.theta = inverse_spd(chol(out.W));

    SymMatrix& w = out.W;
    SymMatrix& theta = out.theta;
    SolveTrace& trace = out.trace;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    auto record = [&](std::size_t sweep, double rel, double col, std::size_t inner) {
        SweepRecord r{sweep, nan, nan, rel, col, inner};
        if (config.record_diagnostics) {
            r.min_eig = min_eigenvalue(theta);
            if (is_spd(theta)) r.objective = objective(theta, s, lam);
        }
        trace.records.push_back(r);
    };
    record(0, nan, nan, 0);

    const std::size_t m = p - 1;
    std::vector<double> beta0(m);
    SymMatrix prev;
    for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        prev = w;
        std::size_t inner = 0;
        if (p == 1) {
            theta.set(0, 0, 1.0 / w(0, 0));
        }
        for (std::size_t k = 0; p > 1 && k < p; ++k) {
            const PartitionView wv = partition_column(w, k);
            const PartitionView sv = partition_column(s, k);
            const PartitionView tv = partition_column(theta, k);

            const double t22 = tv.scalar22();
            for (std::size_t i = 0; i < m; ++i) beta0[i] = t22 > 0 ? tv.vec12()[i] / t22 : 0.0;

            LassoProblem prob{wv, {sv.vec12().begin(), sv.vec12().end()}, lam};
            const SubproblemSolution sol = lasso_cd(prob, beta0, config.inner_tol, config.max_inner);
            inner += sol.inner_iters;
            trace.inner_converged = trace.inner_converged && sol.converged;

            // w12 = -W11 b; the Schur complement w22 - b'W11 b = w22 + b'w12.
            std::vector<double> w12 = BlockRef(wv).multiply(sol.beta);
            double bwb = 0;
            for (std::size_t i = 0; i < m; ++i) {
                w12[i] = -w12[i];
                bwb -= sol.beta[i] * w12[i];
            }
            const double schur = wv.scalar22() - bwb;
            if (!(schur > 0) || !std::isfinite(schur)) throw NotPositiveDefinite(k, schur);
            const double th22 = 1.0 / schur;

            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t si = wv.source_index(i);
                w.set(k, si, w12[i]);
                theta.set(k, si, sol.beta[i] * th22);
            }
            theta.set(k, k, th22);
        }
        const double rel = rel_frobenius_diff(w, prev);
        trace.sweeps = sweep;
        trace.inner_iters += inner;
        record(sweep, rel, max_rel_column_change(w, prev), inner);
        if (rel < config.outer_tol) {
            trace.converged = true;
            break;
        }
    }

    // The recovered precision must be usable as an estimate.
    chol(theta);
    trace.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return out;
}

double block_inverse_identities(const SymMatrix& theta, std::size_t k)
{
    const SymMatrix w = inverse_spd(chol(theta));
    const PartitionView tv = partition_column(theta, k);
    const PartitionView wv = partition_column(w, k);
    const std::size_t m = tv.size();
    const double t22 = tv.scalar22();
    const auto t12 = tv.vec12();

    // Theta11 - t12 t12' / t22
    SymMatrix a(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) a.set(i, j, tv.block11(i, j) - t12[i] * t12[j] / t22);
    }
    const SymMatrix w11 = inverse_spd(chol(a));

    double worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, std::abs(w11(i, j) - wv.block11(i, j)));
    }
    const std::vector<double> w11t = BlockRef(w11).multiply(t12);
    double quad = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double w12 = -w11t[i] / t22;
        // column and row copies of w12
        worst = std::max(worst, std::abs(w12 - wv.vec12()[i]));
        worst = std::max(worst, std::abs(w12 - w(wv.source_index(i), k)));
        quad += t12[i] * w11t[i];
    }
    const double w22 = 1.0 / t22 + quad / (t22 * t22);
    worst = std::max(worst, std::abs(w22 - wv.scalar22()));
    return worst;
}

} // namespace sglasso
