#include <sglasso/sym_matrix.hpp>
#include <sglasso/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sglasso {

SymMatrix::SymMatrix(std::size_t p)
    : p_(p), data_(p * p, 0.0)
{}

SymMatrix SymMatrix::from_row_major(std::size_t p, std::span<const double> values)
{
    if (p == 0) {
        throw InvalidArgument("matrix dimension must be at least 1");
    }
    if (values.size() != p * p) {
        throw DimensionMismatch("expected " + std::to_string(p * p) + " values, got "
                                + std::to_string(values.size()));
    }
    double scale = 0;
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFinite("matrix contains a non-finite value");
        scale = std::max(scale, std::abs(v));
    }
    SymMatrix m(p);
    const double tol = 1e-12 * scale;
    for (std::size_t i = 0; i < p; ++i) {
        m.data_[i * p + i] = values[i * p + i];
        for (std::size_t j = i + 1; j < p; ++j) {
            const double a = values[i * p + j];
            const double b = values[j * p + i];
            if (std::abs(a - b) > tol) {
                throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + ", "
                                      + std::to_string(j) + ")");
            }
            m.set(i, j, a == b ? a : 0.5 * (a + b));
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(std::size_t p)
{
    SymMatrix m(p);
    for (std::size_t i = 0; i < p; ++i) m.data_[i * p + i] = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag)
{
    SymMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * m.p_ + i] = diag[i];
    return m;
}

std::vector<double> SymMatrix::diag() const
{
    std::vector<double> d(p_);
    for (std::size_t i = 0; i < p_; ++i) d[i] = data_[i * p_ + i];
    return d;
}

double SymMatrix::max_abs() const noexcept
{
    double m = 0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool SymMatrix::is_diagonal() const noexcept
{
    for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t j = i + 1; j < p_; ++j) {
            if (data_[i * p_ + j] != 0.0) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// PartitionView
// ---------------------------------------------------------------------------

PartitionView::PartitionView(const SymMatrix& source, std::size_t pivot)
    : source_(&source), pivot_(pivot), vec12_(source.dim() - 1), scalar22_(source(pivot, pivot))
{
    const auto r = source.row(pivot);
    std::copy(r.begin(), r.begin() + pivot, vec12_.begin());
    std::copy(r.begin() + pivot + 1, r.end(), vec12_.begin() + pivot);
}

SymMatrix PartitionView::materialize_block11() const
{
    const std::size_t m = size();
    SymMatrix out(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) out.set(i, j, block11(i, j));
    }
    return out;
}

PartitionView partition_column(const SymMatrix& m, std::size_t k)
{
    if (m.dim() < 2) throw InvalidArgument("partition requires p >= 2");
    if (k >= m.dim()) {
        throw InvalidArgument("pivot index " + std::to_string(k) + " out of range for p = "
                              + std::to_string(m.dim()));
    }
    return PartitionView(m, k);
}

SymMatrix reassemble(const PartitionView& view)
{
    return reassemble(view, view.vec12(), view.scalar22());
}

SymMatrix reassemble(const PartitionView& view, std::span<const double> vec12, double scalar22)
{
    const std::size_t m = view.size();
    if (vec12.size() != m) throw DimensionMismatch("border length does not match partition");
    SymMatrix out(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t si = view.source_index(i);
        for (std::size_t j = i; j < m; ++j) out.set(si, view.source_index(j), view.block11(i, j));
        out.set(si, view.pivot(), vec12[i]);
    }
    out.set(view.pivot(), view.pivot(), scalar22);
    return out;
}

// ---------------------------------------------------------------------------
// Cholesky
// ---------------------------------------------------------------------------

class CholBuilder
{
public:
    // Cholesky-Banachiewicz, row by row. Returns the failing pivot index
    // (or p on success) so callers choose between throwing and testing.
    template <class Access>
    static std::size_t factor(std::size_t p, Access&& a, CholFactor& f, double& bad_value)
    {
        f.p_ = p;
        f.l_.assign(p * p, 0.0);
        double scale = 0;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j <= i; ++j) scale = std::max(scale, std::abs(a(i, j)));
        }
        const double floor = 1e-12 * scale;
        double* l = f.l_.data();
        for (std::size_t i = 0; i < p; ++i) {
            double* li = l + i * p;
            for (std::size_t j = 0; j <= i; ++j) {
                const double* lj = l + j * p;
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
                if (i == j) {
                    if (!(s > floor)) {
                        bad_value = s;
                        return i;
                    }
                    li[i] = std::sqrt(s);
                } else {
                    li[j] = s / lj[j];
                }
            }
        }
        return p;
    }
};

namespace {

template <class Access>
CholFactor factor_or_throw(std::size_t p, Access&& a)
{
    CholFactor f;
    double bad = 0;
    const std::size_t piv = CholBuilder::factor(p, a, f, bad);
    if (piv != p) throw NotPositiveDefinite(piv, bad);
    return f;
}

} // namespace

CholFactor chol(const SymMatrix& a)
{
    if (a.empty()) throw InvalidArgument("cannot factor an empty matrix");
    return factor_or_throw(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j); });
}

CholFactor chol(const PartitionView& view)
{
    return factor_or_throw(view.size(),
                           [&](std::size_t i, std::size_t j) { return view.block11(i, j); });
}

bool is_spd(const SymMatrix& a)
{
    if (a.empty()) return false;
    CholFactor f;
    double bad = 0;
    return CholBuilder::factor(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j); }, f,
                               bad)
           == a.dim();
}

std::vector<double> solve_spd(const CholFactor& f, std::span<const double> b)
{
    const std::size_t p = f.dim();
    if (b.size() != p) {
        throw DimensionMismatch("right-hand side has length " + std::to_string(b.size())
                                + ", factor has dimension " + std::to_string(p));
    }
    std::vector<double> x(b.begin(), b.end());
    // L y = b
    for (std::size_t i = 0; i < p; ++i) {
        const auto li = f.row(i);
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
        x[i] = s / li[i];
    }
    // L' x = y
    for (std::size_t i = p; i-- > 0;) {
        double s = x[i];
        for (std::size_t k = i + 1; k < p; ++k) s -= f(k, i) * x[k];
        x[i] = s / f(i, i);
    }
    return x;
}

double logdet_spd(const CholFactor& f)
{
    double s = 0;
    for (std::size_t i = 0; i < f.dim(); ++i) s += std::log(f(i, i));
    return 2.0 * s;
}

SymMatrix inverse_spd(const CholFactor& f)
{
    const std::size_t p = f.dim();
    // Row j of `ut` holds column j of L^{-1}; entries k < j are zero.
    std::vector<double> ut(p * p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double* x = ut.data() + j * p;
        x[j] = 1.0 / f(j, j);
        for (std::size_t i = j + 1; i < p; ++i) {
            const auto li = f.row(i);
            double s = 0;
            for (std::size_t k = j; k < i; ++k) s -= li[k] * x[k];
            x[i] = s / li[i];
        }
    }
    // A^{-1} = L^{-T} L^{-1}, (i, j) = sum_{k >= max(i, j)} Linv(k, i) Linv(k, j).
    SymMatrix inv(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double* xi = ut.data() + i * p;
        for (std::size_t j = i; j < p; ++j) {
            const double* xj = ut.data() + j * p;
            double s = 0;
            for (std::size_t k = j; k < p; ++k) s += xi[k] * xj[k];
            inv.set(i, j, s);
        }
    }
    return inv;
}

double min_eigenvalue(const SymMatrix& a)
{
    const std::size_t p = a.dim();
    if (p == 0) throw InvalidArgument("empty matrix has no eigenvalues");
    if (p == 1) return a(0, 0);

    double bound = 0;
    for (std::size_t i = 0; i < p; ++i) {
        double s = 0;
        for (double v : a.row(i)) s += std::abs(v);
        bound = std::max(bound, s);
    }
    // A - lo*I is SPD, A - hi*I is not.
    double lo = -bound - 1.0;
    double hi = bound;
    SymMatrix shifted = a;
    auto spd_below = [&](double t) {
        for (std::size_t i = 0; i < p; ++i) shifted.set(i, i, a(i, i) - t);
        return is_spd(shifted);
    };
    while (hi - lo > 2.5e-9) {
        const double mid = 0.5 * (lo + hi);
        if (spd_below(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double rel_frobenius_diff(const SymMatrix& a, const SymMatrix& b)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("rel_frobenius_diff: dimensions differ");
    double num = 0, den = 0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        const double d = av[i] - bv[i];
        num += d * d;
        den += bv[i] * bv[i];
    }
    if (den == 0.0) throw InvalidArgument("rel_frobenius_diff: reference matrix is zero");
    return std::sqrt(num / den);
}

double max_rel_column_change(const SymMatrix& a, const SymMatrix& b)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("max_rel_column_change: dimensions differ");
    double worst = 0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        // Rows equal columns by symmetry.
        const auto ra = a.row(k);
        const auto rb = b.row(k);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < ra.size(); ++i) {
            num += (ra[i] - rb[i]) * (ra[i] - rb[i]);
            den += rb[i] * rb[i];
        }
        if (den == 0.0) throw InvalidArgument("max_rel_column_change: reference column is zero");
        worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

double bilinear(const SymMatrix& a, std::span<const double> x, std::span<const double> y)
{
    const std::size_t p = a.dim();
    if (x.size() != p || y.size() != p) throw DimensionMismatch("bilinear: length mismatch");
    double s = 0;
    for (std::size_t i = 0; i < p; ++i) {
        const auto r = a.row(i);
        double t = 0;
        for (std::size_t j = 0; j < p; ++j) t += r[j] * y[j];
        s += x[i] * t;
    }
    return s;
}

} // namespace sglasso
