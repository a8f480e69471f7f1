#pragma once
#include <sglasso/edge_set.hpp>
#include <sglasso/solver.hpp>
#include <sglasso/sym_matrix.hpp>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sglasso {

enum class StartMode
{
    /// Every lambda starts from (diag(S) + lambda I)^{-1}.
    Cold,
    /// Each lambda starts from the previous estimate on the path.
    Warm,
};

std::string_view to_string(StartMode m) noexcept;
StartMode parse_start_mode(std::string_view name);

/// Off-diagonal pairs with |theta_ij| > threshold.
EdgeSet support_edges(const SymMatrix& theta, double threshold = kZeroThreshold);

/// Off-diagonal entries (both triangles) with |theta_ij| <= threshold.
std::size_t count_offdiag_zeros(const SymMatrix& theta, double threshold = kZeroThreshold);

/// Structural Hamming distance, |a symmetric-difference b|.
std::size_t shd(const EdgeSet& a, const EdgeSet& b);

struct PathEntry
{
    double lambda = 0;
    SymMatrix theta;
    std::size_t sweeps = 0;
    std::size_t inner_iters = 0;
    double wall_seconds = 0;
    EdgeSet support;
    bool converged = false;
};

struct PathResult
{
    std::vector<PathEntry> entries;
    StartMode start = StartMode::Cold;
    Backend backend = Backend::DualQp;

    std::size_t total_sweeps() const noexcept;
    bool all_converged() const noexcept;
};

/*
 * Solves along a strictly decreasing lambda grid. config.lambda is ignored.
 * Cold paths may use several worker threads (entries are independent); warm
 * paths are sequential and also carry the dual warm-start cache forward.
 */
PathResult path_solve(const SymMatrix& s, std::span<const double> grid, StartMode start,
                      const SolverConfig& config, std::size_t threads = 1,
                      double support_threshold = kZeroThreshold);

/// Number of adjacent grid pairs where the support grows as lambda grows.
std::size_t support_monotonicity_violations(const PathResult& path);

struct RocPoint
{
    double fpr = 0;
    double tpr = 0;
};

struct RocCurve
{
    /// Sorted by FPR, with (0,0) and (1,1) included.
    std::vector<RocPoint> points;
    double auc = 0;
};

/// ROC of estimated edge sets against the truth, trapezoid-rule AUC.
RocCurve roc_auc(std::span<const EdgeSet> estimates, const EdgeSet& truth);
RocCurve roc_auc(const PathResult& path, const EdgeSet& truth);

struct OracleSearchResult
{
    double lambda = 0;
    SymMatrix theta;
    std::size_t achieved_zeros = 0;
    /// achieved_zeros - target_zeros.
    long long gap = 0;
    std::size_t solves = 0;
    bool exact = false;
};

/*
 * Bisection on lambda in (0, lambda_max(S)] for an estimate whose
 * thresholded off-diagonal zero count equals target_zeros. Stops when the
 * count matches or the bracket is narrower than 1e-6 * lambda_max; the
 * closest count seen is returned otherwise.
 */
OracleSearchResult oracle_lambda_search(const SymMatrix& s, std::size_t target_zeros,
                                        const SolverConfig& config,
                                        double threshold = kZeroThreshold);

/*
 * Connected components of the graph with edges |s_ij| > tau. Components are
 * sorted by decreasing size (ties by smallest member), members ascending.
 */
std::vector<std::vector<std::size_t>> screen_components(const SymMatrix& s, double tau);

/// Principal submatrix on the given indices.
SymMatrix submatrix(const SymMatrix& m, std::span<const std::size_t> idx);

/// Solves each screened component separately and assembles a block-diagonal estimate.
SymMatrix solve_by_components(const SymMatrix& s, double tau, const SolverConfig& config);

} // namespace sglasso
