#include <sglasso/subproblem.hpp>
#include <sglasso/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sglasso {

namespace {

// Four independent partial sums so the loop is not bound by add latency.
inline double dot(const double* a, const double* b, std::size_t n) noexcept
{
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t c = 0;
    for (; c + 4 <= n; c += 4) {
        s0 += a[c] * b[c];
        s1 += a[c + 1] * b[c + 1];
        s2 += a[c + 2] * b[c + 2];
        s3 += a[c + 3] * b[c + 3];
    }
    for (; c < n; ++c) s0 += a[c] * b[c];
    return (s0 + s1) + (s2 + s3);
}

// sum over c in [0, n) \ {own} of row[c] * x[c]
inline double dot_excluding(const double* row, const double* x, std::size_t n, std::size_t own) noexcept
{
    return dot(row, x, own) + dot(row + own + 1, x + own + 1, n - own - 1);
}

double inf_norm(std::span<const double> x) noexcept
{
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void check_finite(std::span<const double> x, const char* what)
{
    for (double v : x) {
        if (!std::isfinite(v)) throw NonFinite(std::string(what) + ": non-finite iterate");
    }
}

void check_lengths(const BlockRef& m, std::span<const double> s, std::span<const double> x,
                   const char* what)
{
    if (s.size() != m.size() || x.size() != m.size()) {
        throw DimensionMismatch(std::string(what) + ": vector lengths do not match block size "
                                + std::to_string(m.size()));
    }
}

} // namespace

std::vector<double> BlockRef::multiply(std::span<const double> x) const
{
    if (x.size() != n_) throw DimensionMismatch("BlockRef::multiply: length mismatch");
    const std::size_t full = src_->dim();
    // Scatter into source coordinates; the excluded slot stays zero.
    std::vector<double> xf(full, 0.0);
    for (std::size_t i = 0; i < n_; ++i) xf[source_index(i)] = x[i];
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        y[i] = dot(src_->row(source_index(i)).data(), xf.data(), full);
    }
    return y;
}

double soft_threshold(double x, double lam) noexcept
{
    if (x > lam) return x - lam;
    if (x < -lam) return x + lam;
    return 0.0;
}

double lasso_objective(const LassoProblem& prob, std::span<const double> beta)
{
    check_lengths(prob.V, prob.s12, beta, "lasso_objective");
    const auto vb = prob.V.multiply(beta);
    double quad = 0, lin = 0, l1 = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        quad += beta[j] * vb[j];
        lin += prob.s12[j] * beta[j];
        l1 += std::abs(beta[j]);
    }
    return 0.5 * quad + lin + prob.lambda * l1;
}

double box_qp_objective(const BoxQpProblem& prob, std::span<const double> u)
{
    check_lengths(prob.theta11, prob.s12, u, "box_qp_objective");
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = prob.s12[i] + u[i];
    const auto tv = prob.theta11.multiply(v);
    double q = 0;
    for (std::size_t i = 0; i < v.size(); ++i) q += v[i] * tv[i];
    return 0.5 * q;
}

SubproblemSolution lasso_cd(const LassoProblem& prob, std::span<const double> beta0, double tol,
                            std::size_t max_inner)
{
    check_lengths(prob.V, prob.s12, beta0, "lasso_cd");
    if (!(prob.lambda >= 0)) throw InvalidArgument("lasso_cd: lambda must be non-negative");
    if (!(tol > 0)) throw InvalidArgument("lasso_cd: tolerance must be positive");
    check_finite(beta0, "lasso_cd");

    const std::size_t m = prob.V.size();
    const SymMatrix& src = prob.V.source();
    const double lam = prob.lambda;

    SubproblemSolution sol;
    sol.beta.assign(beta0.begin(), beta0.end());
    auto& beta = sol.beta;

    // grad = V beta + s12, kept current as coordinates move.
    std::vector<double> grad = prob.V.multiply(beta);
    for (std::size_t j = 0; j < m; ++j) grad[j] += prob.s12[j];

    std::vector<double> diag(m);
    for (std::size_t j = 0; j < m; ++j) {
        diag[j] = prob.V(j, j);
        if (!(diag[j] > 0)) throw NotPositiveDefinite(j, diag[j]);
    }

    sol.converged = false;
    for (std::size_t pass = 0; pass < max_inner; ++pass) {
        double max_delta = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double old = beta[j];
            const double partial = old == 0.0 ? grad[j] : grad[j] - diag[j] * old;
            const double upd = soft_threshold(-partial, lam) / diag[j];
            if (upd == old) continue;
            const double delta = upd - old;
            beta[j] = upd;
            const double* r = src.row(prob.V.source_index(j)).data();
            for (std::size_t i = 0; i < m; ++i) grad[i] += delta * r[prob.V.source_index(i)];
            max_delta = std::max(max_delta, std::abs(delta));
        }
        sol.inner_iters = pass + 1;
        if (!std::isfinite(max_delta)) throw NonFinite("lasso_cd: non-finite iterate");
        if (max_delta <= tol * (1.0 + inf_norm(beta))) {
            sol.converged = true;
            break;
        }
    }
    check_finite(beta, "lasso_cd");
    return sol;
}

SubproblemSolution box_qp_cd(const BoxQpProblem& prob, std::span<const double> u0, double tol,
                             std::size_t max_inner, double gap_target)
{
    check_lengths(prob.theta11, prob.s12, u0, "box_qp_cd");
    const double lam = prob.lambda;
    if (!(lam >= 0)) throw InvalidArgument("box_qp_cd: lambda must be non-negative");
    if (!(prob.s22 + lam > 0)) throw InvalidArgument("box_qp_cd: s22 + lambda must be positive");
    if (!(tol > 0)) throw InvalidArgument("box_qp_cd: tolerance must be positive");
    check_finite(u0, "box_qp_cd");
    if (inf_norm(u0) > lam) throw InvalidArgument("box_qp_cd: starting point lies outside the box");

    const BlockRef& th = prob.theta11;
    const std::size_t m = th.size();
    const SymMatrix& src = th.source();
    const std::size_t full = src.dim();

    std::vector<double> u(u0.begin(), u0.end());
    // v = s12 + u in source coordinates; the excluded slot stays zero.
    std::vector<double> vf(full, 0.0);
    for (std::size_t i = 0; i < m; ++i) vf[th.source_index(i)] = prob.s12[i] + u[i];

    bool converged = false;
    std::size_t passes = 0;
    double pass_tol = tol;
    std::optional<SubproblemSolution> sol;
    for (; passes < max_inner;) {
        double max_delta = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t si = th.source_index(i);
            const double* r = src.row(si).data();
            const double off = dot_excluding(r, vf.data(), full, si);
            const double target = -off / r[si] - prob.s12[i];
            const double upd = std::clamp(target, -lam, lam);
            if (upd == u[i]) continue;
            max_delta = std::max(max_delta, std::abs(upd - u[i]));
            u[i] = upd;
            vf[si] = prob.s12[i] + upd;
        }
        ++passes;
        if (!std::isfinite(max_delta)) throw NonFinite("box_qp_cd: non-finite iterate");
        if (max_delta > pass_tol * (1.0 + inf_norm(u))) continue;

        if (std::isinf(gap_target)) {
            converged = true;
            break;
        }
        sol = recover_from_dual(prob, u);
        if (sol->duality_gap <= gap_target) {
            converged = true;
            break;
        }
        // A pass that moved nothing is a fixed point; more passes cannot shrink the gap.
        if (max_delta == 0 || pass_tol < tol * 1e-3) break;
        pass_tol *= 0.1;
        sol.reset();
    }

    if (!sol) sol = recover_from_dual(prob, u);
    if (passes == max_inner) converged = false;
    sol->inner_iters = passes;
    sol->converged = converged;
    return std::move(*sol);
}

SubproblemSolution recover_from_dual(const BoxQpProblem& prob, std::span<const double> u_hat)
{
    check_lengths(prob.theta11, prob.s12, u_hat, "recover_from_dual");
    const double lam = prob.lambda;
    const double denom = prob.s22 + lam;
    if (!(denom > 0)) throw InvalidArgument("recover_from_dual: s22 + lambda must be positive");
    if (inf_norm(u_hat) > lam) throw InvalidArgument("recover_from_dual: dual point violates the box");

    const std::size_t m = u_hat.size();
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = prob.s12[i] + u_hat[i];

    SubproblemSolution sol;
    sol.beta = prob.theta11.multiply(v);
    double vb = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sol.beta[i] = -sol.beta[i] / denom;
        vb += v[i] * sol.beta[i];
    }
    check_finite(sol.beta, "recover_from_dual");
    sol.gamma = 1.0 / denom;
    sol.theta22 = sol.gamma - vb / denom;
    sol.duality_gap = dual_gap(lam, u_hat, sol.beta);
    sol.u_hat.emplace(u_hat.begin(), u_hat.end());
    return sol;
}

double dual_gap(double lambda, std::span<const double> u, std::span<const double> beta)
{
    if (u.size() != beta.size()) throw DimensionMismatch("dual_gap: u and beta lengths differ");
    double g = 0;
    for (std::size_t j = 0; j < u.size(); ++j) g += lambda * std::abs(beta[j]) - u[j] * beta[j];
    return g;
}

} // namespace sglasso
