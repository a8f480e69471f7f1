#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace sglasso {

/*
 * Dense symmetric matrix.
 *
 * Values are held as a contiguous p×p row-major block so that a row of the
 * matrix (and, by symmetry, a column) is a contiguous span. Every mutation
 * goes through set(), which writes both (i, j) and (j, i), so the stored
 * block is always exactly symmetric.
 */
class SymMatrix
{
public:
    SymMatrix() = default;

    /// p×p zero matrix.
    explicit SymMatrix(std::size_t p);

    /// Builds from p*p row-major values. Throws InvalidArgument when the
    /// asymmetry exceeds 1e-12 relative to the largest magnitude; tolerated
    /// asymmetry is averaged out.
    static SymMatrix from_row_major(std::size_t p, std::span<const double> values);

    static SymMatrix identity(std::size_t p);
    static SymMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return p_; }
    bool empty() const noexcept { return p_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * p_ + j]; }

    /// Writes (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v) noexcept
    {
        data_[i * p_ + j] = v;
        data_[j * p_ + i] = v;
    }

    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * p_, p_};
    }
    std::span<const double> values() const noexcept { return data_; }

    std::vector<double> diag() const;
    double max_abs() const noexcept;
    bool is_diagonal() const noexcept;

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    std::size_t p_ = 0;
    std::vector<double> data_;
};

/*
 * Logical partition of a symmetric matrix around a pivot index k:
 *
 *      [ block11  vec12    ]
 *      [ vec12'   scalar22 ]
 *
 * block11 is the source with row/column k removed, indices keeping their
 * relative order. Only the border (vec12, scalar22) is copied; block11 reads
 * through to the source, which must outlive the view.
 */
class PartitionView
{
public:
    PartitionView(const SymMatrix& source, std::size_t pivot);

    std::size_t pivot() const noexcept { return pivot_; }
    /// Dimension of block11, i.e. p - 1.
    std::size_t size() const noexcept { return vec12_.size(); }

    /// Maps a block11 index to the source index.
    std::size_t source_index(std::size_t i) const noexcept { return i < pivot_ ? i : i + 1; }

    double block11(std::size_t i, std::size_t j) const noexcept
    {
        return (*source_)(source_index(i), source_index(j));
    }
    std::span<const double> vec12() const noexcept { return vec12_; }
    double scalar22() const noexcept { return scalar22_; }

    const SymMatrix& source() const noexcept { return *source_; }

    SymMatrix materialize_block11() const;

private:
    const SymMatrix* source_;
    std::size_t pivot_;
    std::vector<double> vec12_;
    double scalar22_;
};

/// Checked constructor for PartitionView: requires p >= 2 and k < p.
PartitionView partition_column(const SymMatrix& m, std::size_t k);

/// Rebuilds the full matrix from a partition of it with the given border.
SymMatrix reassemble(const PartitionView& view);
SymMatrix reassemble(const PartitionView& view, std::span<const double> vec12, double scalar22);

/*
 * Lower-triangular Cholesky factor, A = L L'.
 * Stored as a dense row-major p×p block with zeros above the diagonal.
 */
class CholFactor
{
public:
    std::size_t dim() const noexcept { return p_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return l_[i * p_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {l_.data() + i * p_, i + 1}; }

private:
    friend class CholBuilder;
    std::size_t p_ = 0;
    std::vector<double> l_;
};

/// Throws NotPositiveDefinite when a pivot is <= 1e-12 * max|A|.
CholFactor chol(const SymMatrix& a);
/// Factor of the block11 part of a partition.
CholFactor chol(const PartitionView& view);
/// Non-throwing SPD test with the same pivot floor as chol().
bool is_spd(const SymMatrix& a);

std::vector<double> solve_spd(const CholFactor& f, std::span<const double> b);
double logdet_spd(const CholFactor& f);
SymMatrix inverse_spd(const CholFactor& f);

/// Smallest eigenvalue to within 1e-8 by bisection on SPD tests of A - tI.
double min_eigenvalue(const SymMatrix& a);

/// ||A - B||_F / ||B||_F.
double rel_frobenius_diff(const SymMatrix& a, const SymMatrix& b);

/// max_k ||a_k - b_k||_2 / ||b_k||_2 over columns k.
double max_rel_column_change(const SymMatrix& a, const SymMatrix& b);

/// Quadratic form x' A y over the full matrix.
double bilinear(const SymMatrix& a, std::span<const double> x, std::span<const double> y);

} // namespace sglasso
