#pragma once
#include <sglasso/sym_matrix.hpp>

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace sglasso {

/*
 * Non-owning reference to a symmetric matrix, or to the block11 part of a
 * partition of one. Subproblem kernels read rows of the source directly and
 * step over the excluded pivot, so no (p-1)×(p-1) copy is made.
 */
class BlockRef
{
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    /* implicit */ BlockRef(const SymMatrix& m) noexcept : src_(&m), skip_(npos), n_(m.dim()) {}
    /* implicit */ BlockRef(const PartitionView& v) noexcept
        : src_(&v.source()), skip_(v.pivot()), n_(v.size())
    {}

    std::size_t size() const noexcept { return n_; }
    std::size_t source_index(std::size_t i) const noexcept { return i < skip_ ? i : i + 1; }
    double operator()(std::size_t i, std::size_t j) const noexcept
    {
        return (*src_)(source_index(i), source_index(j));
    }
    const SymMatrix& source() const noexcept { return *src_; }
    std::size_t skip() const noexcept { return skip_; }

    /// y = B x, block coordinates.
    std::vector<double> multiply(std::span<const double> x) const;

private:
    const SymMatrix* src_;
    std::size_t skip_;
    std::size_t n_;
};

/// min ½ b'Vb + s12'b + lambda*||b||_1. V must be SPD.
struct LassoProblem
{
    BlockRef V;
    std::vector<double> s12;
    double lambda = 0;
};

/// min ½ (s12+u)' Theta11 (s12+u) over |u_i| <= lambda.
struct BoxQpProblem
{
    BlockRef theta11;
    std::vector<double> s12;
    double lambda = 0;
    double s22 = 0;
};

struct SubproblemSolution
{
    std::vector<double> beta;
    /// 1/(s22 + lambda); zero when only beta was solved for.
    double gamma = 0;
    /// New diagonal entry gamma + beta' Theta11^{-1} beta; zero when unknown.
    double theta22 = 0;
    std::optional<std::vector<double>> u_hat;
    /// sum_j (lambda |beta_j| - u_j beta_j) for dual solves; bounds the primal suboptimality.
    double duality_gap = 0;
    std::size_t inner_iters = 0;
    bool converged = true;
};

inline constexpr double kDefaultInnerTol = 1e-9;
inline constexpr std::size_t kDefaultMaxInner = 10000;

/// sign(x) * max(|x| - lam, 0).
double soft_threshold(double x, double lam) noexcept;

double lasso_objective(const LassoProblem& prob, std::span<const double> beta);
double box_qp_objective(const BoxQpProblem& prob, std::span<const double> u);

/*
 * Cyclic coordinate descent for the Lasso, coordinates visited in ascending
 * order. Each update is
 *
 *      b_j <- S(-[s_j + sum_{k != j} V_jk b_k], lambda) / V_jj.
 *
 * Stops when the largest coordinate change in a pass is at most
 * tol * (1 + ||b||_inf), or after max_inner passes (converged = false).
 */
SubproblemSolution lasso_cd(const LassoProblem& prob, std::span<const double> beta0,
                            double tol = kDefaultInnerTol,
                            std::size_t max_inner = kDefaultMaxInner);

/*
 * Cyclic coordinate descent on the box-constrained dual. Each coordinate is
 * set to the clipped minimizer given the others, so iterates never leave the
 * box. Stops once a pass moves no coordinate by more than tol * (1 + ||u||_inf)
 * and the duality gap of the recovered beta is at most gap_target. While the
 * gap is too large the pass threshold is divided by 10, down to tol * 1e-3;
 * past that the solve returns with converged = false. The returned solution
 * carries u_hat, the gap and the recovered (beta, gamma, theta22) from
 * recover_from_dual().
 */
SubproblemSolution box_qp_cd(const BoxQpProblem& prob, std::span<const double> u0,
                             double tol = kDefaultInnerTol,
                             std::size_t max_inner = kDefaultMaxInner,
                             double gap_target = std::numeric_limits<double>::infinity());

/*
 * Primal recovery from a dual point:
 *
 *      beta    = -Theta11 (s12 + u) / (s22 + lambda)
 *      gamma   = 1 / (s22 + lambda)
 *      theta22 = gamma - (s12 + u)' beta / (s22 + lambda)
 *
 * The minus sign is the one that satisfies stationarity of the primal Lasso.
 */
SubproblemSolution recover_from_dual(const BoxQpProblem& prob, std::span<const double> u_hat);

/// sum_j (lambda |beta_j| - u_j beta_j), non-negative whenever |u| <= lambda.
double dual_gap(double lambda, std::span<const double> u, std::span<const double> beta);

} // namespace sglasso
