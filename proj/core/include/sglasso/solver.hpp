#pragma once
#include <sglasso/subproblem.hpp>
#include <sglasso/sym_matrix.hpp>

#include <cstddef>
#include <string_view>
#include <vector>

namespace sglasso {

/// How the beta block of each column update is solved.
enum class Backend
{
    /// Lasso coordinate descent against (s22 + lambda) * Theta11^{-1}.
    PrimalCd,
    /// Box-constrained dual against Theta11, no inverse formed.
    DualQp,
};

std::string_view to_string(Backend b) noexcept;
/// Accepts "primal-cd" and "dual-qp"; throws InvalidArgument otherwise.
Backend parse_backend(std::string_view name);

inline constexpr double kZeroThreshold = 1e-6;

struct SolverConfig
{
    double lambda = 0;
    Backend backend = Backend::DualQp;
    /// Relative Frobenius change between successive full sweeps.
    double outer_tol = 1e-4;
    std::size_t max_sweeps = 500;
    double inner_tol = kDefaultInnerTol;
    std::size_t max_inner = kDefaultMaxInner;
    /// Objective and minimum eigenvalue per sweep (costly for large p).
    bool record_diagnostics = false;
};

/// Reparametrized last column: beta = theta12, gamma = theta22 - beta' Theta11^{-1} beta.
struct ColumnParams
{
    std::vector<double> beta;
    double gamma = 0;
};

struct SweepRecord
{
    std::size_t sweep = 0;
    /// NaN unless diagnostics were requested.
    double objective = 0;
    double min_eig = 0;
    /// Relative Frobenius change from the previous sweep (the convergence
    /// measure) and the largest relative change of a single column. Both NaN
    /// for the initial point.
    double rel_change = 0;
    double max_rel_change = 0;
    std::size_t inner_iters = 0;
};

struct SolveTrace
{
    /// Entry 0 is the starting point; entry k follows sweep k.
    std::vector<SweepRecord> records;
    std::size_t sweeps = 0;
    bool converged = false;
    /// False if any inner solve stopped at max_inner.
    bool inner_converged = true;
    std::size_t inner_iters = 0;
    double wall_seconds = 0;
};

struct Estimate
{
    SymMatrix theta_hat;
    SolveTrace trace;
    SolverConfig config;
};

/*
 * Dual points from the previous visit of each column, used to warm start
 * the box-QP backend. Entries are clipped to the current box on use, so a
 * cache can be carried along a decreasing lambda path.
 */
class DualWarmStart
{
public:
    DualWarmStart() = default;
    explicit DualWarmStart(std::size_t p) : u_(p) {}

    std::size_t dim() const noexcept { return u_.size(); }
    /// Stored point for column k clipped to [-lambda, lambda], or zeros.
    std::vector<double> start(std::size_t k, double lambda) const;
    void store(std::size_t k, std::vector<double> u) { u_.at(k) = std::move(u); }

private:
    std::vector<std::vector<double>> u_;
};

/// -logdet(theta) + tr(S theta) + lambda * sum_ij |theta_ij|. The diagonal is penalized.
double objective(const SymMatrix& theta, const SymMatrix& s, double lambda);

/*
 * The column objective in the reparametrized variables,
 *
 *   {-log g + (s22+l) g} + {(s22+l) b' Theta11^{-1} b + 2 s12'b + 2 l ||b||_1},
 *
 * which differs from objective() by a term that depends only on Theta11.
 */
double decoupled_column_objective(const ColumnParams& cp, const PartitionView& theta,
                                  const PartitionView& s, double lambda);

/// Minimizer of -log g + (s22 + lambda) g.
double gamma_update(double s22, double lambda);

/// (beta, gamma) of the pivot column of theta.
ColumnParams column_params(const PartitionView& theta);

/// (diag(S) + lambda I)^{-1}.
SymMatrix cold_start(const SymMatrix& s, double lambda);

struct ColumnUpdate
{
    std::size_t inner_iters = 0;
    bool converged = true;
};

/// One block update of row/column k of theta in place; Theta11 is left untouched.
ColumnUpdate sweep_column(SymMatrix& theta, const SymMatrix& s, std::size_t k,
                          const SolverConfig& config, DualWarmStart* dual = nullptr);

Estimate solve(const SymMatrix& s, const SolverConfig& config);
/// Starts from an arbitrary SPD matrix instead of the cold start.
Estimate solve(const SymMatrix& s, const SolverConfig& config, const SymMatrix& warm_start);
/// Full form: optional warm start matrix and optional dual cache (both may be null).
Estimate solve(const SymMatrix& s, const SolverConfig& config, const SymMatrix* warm_start,
               DualWarmStart* dual);

/*
 * Largest violation of the subgradient condition Theta^{-1} - S - lambda*Gamma = 0.
 * Entries with |theta_ij| <= zero_threshold are checked in inequality form,
 * |w_ij - s_ij| <= lambda.
 */
double check_stationarity(const SymMatrix& theta, const SymMatrix& s, double lambda,
                          double zero_threshold = kZeroThreshold);

/// Throws InvalidArgument unless s is a usable sample covariance for lambda.
void validate_problem(const SymMatrix& s, double lambda);

} // namespace sglasso
