#pragma once
#include <sglasso/solver.hpp>
#include <sglasso/sym_matrix.hpp>

#include <cstddef>

namespace sglasso {

/// Output of the classic covariance-side GLasso.
struct GlassoResult
{
    /// Precision matrix assembled from the per-column recoveries.
    SymMatrix theta;
    /// Working covariance estimate, the iterate the algorithm updates.
    SymMatrix W;
    /// rel_change is measured on W; objective/min_eig are of the recovered theta
    /// and may be NaN mid-run when theta is not positive definite.
    SolveTrace trace;
};

/*
 * Classic GLasso block coordinate descent on W = Theta^{-1}, from
 * W0 = S + lambda*I. For each column k, with W11 held fixed:
 *
 *      b     = argmin ½ b'W11 b + b's12 + lambda ||b||_1
 *      w12   = -W11 b
 *      th22  = 1 / (w22 - b'W11 b)
 *      th12  = b * th22
 *
 * Converges when the relative Frobenius change of W drops below outer_tol.
 * config.backend is ignored.
 */
GlassoResult glasso_solve(const SymMatrix& s, const SolverConfig& config);

/*
 * Checks the block-inverse identities for pivot k of theta against a dense
 * inverse W:
 *
 *      W11 = (Theta11 - t12 t12' / t22)^{-1}
 *      w12 = -W11 t12 / t22            (and its transpose)
 *      w22 = 1/t22 + t12' W11 t12 / t22^2
 *
 * Returns the largest absolute residual.
 */
double block_inverse_identities(const SymMatrix& theta, std::size_t k);

} // namespace sglasso
