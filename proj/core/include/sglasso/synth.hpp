#pragma once
#include <sglasso/edge_set.hpp>
#include <sglasso/matrix_io.hpp>
#include <sglasso/sym_matrix.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sglasso {

enum class Model
{
    SparseRandom,
    Ar2,
};

std::string_view to_string(Model m) noexcept;
Model parse_model(std::string_view name);

struct GroundTruth
{
    SymMatrix theta_star;
    /// Exact nonzero pattern of theta_star off the diagonal.
    EdgeSet edges;
    Model model = Model::SparseRandom;
    std::uint64_t seed = 0;
    /// Share of off-diagonal pairs that are zero.
    double zero_fraction = 0;
};

struct Dataset
{
    /// n×p samples.
    DenseMatrix Y;
    SymMatrix S;
    std::size_t n = 0;
    std::size_t p = 0;
    std::uint64_t seed = 0;
};

/// How the diagonal of a sparse-random precision matrix is set.
enum class DiagonalRule
{
    /// |lambda_min(A)| + kEigenShiftMargin for the off-diagonal part A.
    EigenShift,
    /// Row absolute sum + 0.1 (strict diagonal dominance).
    Dominance,
};

inline constexpr double kEigenShiftMargin = 1.0;
inline constexpr double kDominanceMargin = 0.1;

std::string_view to_string(DiagonalRule r) noexcept;
DiagonalRule parse_diagonal_rule(std::string_view name);

/*
 * Erdos-Renyi support with exactly round((1 - zero_fraction) * p(p-1)/2)
 * edges, magnitudes uniform on [0.2, 0.6] with a random sign. Dominance
 * makes partial correlations shrink like 1/(row degree), so edge recovery is
 * close to chance at p = 200; EigenShift keeps them comparable to the
 * usual huge-style generator.
 */
GroundTruth gen_sparse_precision(std::size_t p, double zero_fraction, std::uint64_t seed,
                                 DiagonalRule rule = DiagonalRule::EigenShift);
GroundTruth gen_ar2_precision(std::size_t p);

/// n zero-mean Gaussian rows with covariance theta_star^{-1}.
Dataset sample_gaussian(const GroundTruth& gt, std::size_t n, std::uint64_t seed);
/// Y'Y / n (the mean is known to be zero).
SymMatrix sample_covariance(const DenseMatrix& y);

/// max_{i != j} |s_ij|.
double lambda_max(const SymMatrix& s);
/// lambda_i = 0.8^i * 0.9 * lmax, i = 1..count, decreasing.
std::vector<double> lambda_grid(double lmax, std::size_t count = 20);

} // namespace sglasso
