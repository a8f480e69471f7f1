#include <sglasso/synth.hpp>
#include <sglasso/error.hpp>
#include <sglasso/random.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sglasso {

std::string_view to_string(Model m) noexcept
{
    switch (m) {
    case Model::SparseRandom: return "sparse-random";
    case Model::Ar2: return "ar2";
    }
    return "unknown";
}

Model parse_model(std::string_view name)
{
    if (name == "sparse-random") return Model::SparseRandom;
    if (name == "ar2") return Model::Ar2;
    throw InvalidArgument("unknown model '" + std::string(name) + "' (expected sparse-random or ar2)");
}

std::string_view to_string(DiagonalRule r) noexcept
{
    return r == DiagonalRule::EigenShift ? "eigen-shift" : "dominance";
}

DiagonalRule parse_diagonal_rule(std::string_view name)
{
    if (name == "eigen-shift") return DiagonalRule::EigenShift;
    if (name == "dominance") return DiagonalRule::Dominance;
    throw InvalidArgument("unknown diagonal rule '" + std::string(name) + "' (expected eigen-shift or dominance)");
}

namespace {

EdgeSet nonzero_pattern(const SymMatrix& m)
{
    EdgeSet e(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = i + 1; j < m.dim(); ++j) {
            if (m(i, j) != 0.0) e.insert(i, j);
        }
    }
    return e;
}

double zero_share(const EdgeSet& e)
{
    const std::size_t total = e.max_edges();
    return total == 0 ? 1.0 : 1.0 - static_cast<double>(e.size()) / static_cast<double>(total);
}

} // namespace

GroundTruth gen_sparse_precision(std::size_t p, double zero_fraction, std::uint64_t seed,
                                 DiagonalRule rule)
{
    if (p < 2) throw InvalidArgument("gen_sparse_precision: p must be at least 2");
    if (!(zero_fraction >= 0.0 && zero_fraction <= 1.0)) {
        throw InvalidArgument("gen_sparse_precision: zero fraction must lie in [0, 1]");
    }
    Rng rng(seed);
    const std::size_t pairs = p * (p - 1) / 2;
    const auto n_edges = static_cast<std::size_t>(std::llround((1.0 - zero_fraction) * static_cast<double>(pairs)));

    // Uniform n_edges-subset of the pairs (partial Fisher-Yates).
    std::vector<std::size_t> idx(pairs);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t t = 0; t < n_edges; ++t) {
        const std::size_t r = t + static_cast<std::size_t>(rng.below(pairs - t));
        std::swap(idx[t], idx[r]);
    }
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_edges));

    // Linear pair index -> (i, j), i < j, row-major over the upper triangle.
    std::vector<std::size_t> row_start(p);
    for (std::size_t i = 0, acc = 0; i < p; ++i) {
        row_start[i] = acc;
        acc += p - 1 - i;
    }
    SymMatrix theta(p);
    for (std::size_t t = 0; t < n_edges; ++t) {
        const std::size_t lin = idx[t];
        const auto it = std::upper_bound(row_start.begin(), row_start.end(), lin);
        const std::size_t i = static_cast<std::size_t>(it - row_start.begin()) - 1;
        const std::size_t j = i + 1 + (lin - row_start[i]);
        const double mag = rng.uniform(0.2, 0.6);
        theta.set(i, j, rng.uniform() < 0.5 ? -mag : mag);
    }
    if (rule == DiagonalRule::Dominance) {
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < p; ++j) {
                if (j != i) s += std::abs(theta(i, j));
            }
            theta.set(i, i, s + kDominanceMargin);
        }
    } else {
        // The off-diagonal part has zero trace, so its smallest eigenvalue is <= 0.
        const double d = std::max(0.0, -min_eigenvalue(theta)) + kEigenShiftMargin;
        for (std::size_t i = 0; i < p; ++i) theta.set(i, i, d);
    }

    GroundTruth gt;
    gt.edges = nonzero_pattern(theta);
    gt.theta_star = std::move(theta);
    gt.model = Model::SparseRandom;
    gt.seed = seed;
    gt.zero_fraction = zero_share(gt.edges);
    return gt;
}

GroundTruth gen_ar2_precision(std::size_t p)
{
    if (p < 3) throw InvalidArgument("gen_ar2_precision: p must be at least 3");
    SymMatrix theta(p);
    for (std::size_t i = 0; i < p; ++i) {
        theta.set(i, i, 1.0);
        if (i + 1 < p) theta.set(i, i + 1, 0.5);
        if (i + 2 < p) theta.set(i, i + 2, 0.25);
    }
    GroundTruth gt;
    gt.edges = nonzero_pattern(theta);
    gt.theta_star = std::move(theta);
    gt.model = Model::Ar2;
    gt.seed = 0;
    gt.zero_fraction = zero_share(gt.edges);
    return gt;
}

Dataset sample_gaussian(const GroundTruth& gt, std::size_t n, std::uint64_t seed)
{
    if (n < 2) throw InvalidArgument("sample_gaussian: n must be at least 2");
    const std::size_t p = gt.theta_star.dim();
    const SymMatrix sigma = inverse_spd(chol(gt.theta_star));
    const CholFactor l = chol(sigma);

    Rng rng(seed);
    Dataset d;
    d.n = n;
    d.p = p;
    d.seed = seed;
    d.Y.rows = n;
    d.Y.cols = p;
    d.Y.values.assign(n * p, 0.0);
    std::vector<double> z(p);
    for (std::size_t r = 0; r < n; ++r) {
        for (auto& v : z) v = rng.normal();
        double* y = d.Y.values.data() + r * p;
        // y = L z
        for (std::size_t i = 0; i < p; ++i) {
            const auto li = l.row(i);
            double s = 0;
            for (std::size_t k = 0; k <= i; ++k) s += li[k] * z[k];
            y[i] = s;
        }
    }
    d.S = sample_covariance(d.Y);
    return d;
}

SymMatrix sample_covariance(const DenseMatrix& y)
{
    if (y.rows == 0 || y.cols == 0) throw InvalidArgument("sample_covariance: empty data");
    const std::size_t n = y.rows, p = y.cols;
    std::vector<double> acc(p * p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = y.values.data() + r * p;
        for (std::size_t i = 0; i < p; ++i) {
            const double yi = row[i];
            double* a = acc.data() + i * p;
            for (std::size_t j = i; j < p; ++j) a[j] += yi * row[j];
        }
    }
    SymMatrix s(p);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) s.set(i, j, acc[i * p + j] * inv_n);
    }
    return s;
}

double lambda_max(const SymMatrix& s)
{
    if (s.dim() < 2) throw InvalidArgument("lambda_max: p must be at least 2");
    double m = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        for (std::size_t j = i + 1; j < s.dim(); ++j) m = std::max(m, std::abs(s(i, j)));
    }
    return m;
}

std::vector<double> lambda_grid(double lmax, std::size_t count)
{
    if (!(lmax > 0) || !std::isfinite(lmax)) throw InvalidArgument("lambda_grid: lmax must be positive");
    std::vector<double> grid(count);
    double f = 0.9 * lmax;
    for (std::size_t i = 0; i < count; ++i) {
        f *= 0.8;
        grid[i] = f;
    }
    return grid;
}

} // namespace sglasso
