#include <sglasso/evaluation.hpp>
#include <sglasso/error.hpp>
#include <sglasso/synth.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace sglasso {

std::string_view to_string(StartMode m) noexcept
{
    return m == StartMode::Cold ? "cold" : "warm";
}

StartMode parse_start_mode(std::string_view name)
{
    if (name == "cold") return StartMode::Cold;
    if (name == "warm") return StartMode::Warm;
    throw InvalidArgument("unknown start mode '" + std::string(name) + "' (expected cold or warm)");
}

EdgeSet support_edges(const SymMatrix& theta, double threshold)
{
    if (!(threshold >= 0)) throw InvalidArgument("support threshold must be non-negative");
    EdgeSet e(theta.dim());
    for (std::size_t i = 0; i < theta.dim(); ++i) {
        const auto r = theta.row(i);
        for (std::size_t j = i + 1; j < theta.dim(); ++j) {
            if (std::abs(r[j]) > threshold) e.insert(i, j);
        }
    }
    return e;
}

std::size_t count_offdiag_zeros(const SymMatrix& theta, double threshold)
{
    const std::size_t p = theta.dim();
    return p * (p - 1) - 2 * support_edges(theta, threshold).size();
}

std::size_t shd(const EdgeSet& a, const EdgeSet& b)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("shd: edge sets have different dimensions");
    std::size_t common = 0;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return a.size() + b.size() - 2 * common;
}

std::size_t PathResult::total_sweeps() const noexcept
{
    std::size_t t = 0;
    for (const auto& e : entries) t += e.sweeps;
    return t;
}

bool PathResult::all_converged() const noexcept
{
    return std::all_of(entries.begin(), entries.end(), [](const PathEntry& e) { return e.converged; });
}

namespace {

PathEntry make_entry(double lambda, Estimate&& est, double threshold)
{
    PathEntry e;
    e.lambda = lambda;
    e.sweeps = est.trace.sweeps;
    e.inner_iters = est.trace.inner_iters;
    e.wall_seconds = est.trace.wall_seconds;
    e.converged = est.trace.converged;
    e.support = support_edges(est.theta_hat, threshold);
    e.theta = std::move(est.theta_hat);
    return e;
}

} // namespace

PathResult path_solve(const SymMatrix& s, std::span<const double> grid, StartMode start,
                      const SolverConfig& config, std::size_t threads, double support_threshold)
{
    if (grid.empty()) throw InvalidArgument("path_solve: lambda grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1])) throw InvalidArgument("path_solve: lambda grid must be strictly decreasing");
    }

    PathResult out;
    out.start = start;
    out.backend = config.backend;
    out.entries.resize(grid.size());

    if (start == StartMode::Warm) {
        DualWarmStart dual(s.dim());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            SolverConfig c = config;
            c.lambda = grid[i];
            const SymMatrix* warm = i == 0 ? nullptr : &out.entries[i - 1].theta;
            out.entries[i] = make_entry(grid[i], solve(s, c, warm, &dual), support_threshold);
        }
        return out;
    }

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                SolverConfig c = config;
                c.lambda = grid[i];
                out.entries[i] = make_entry(grid[i], solve(s, c), support_threshold);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::size_t support_monotonicity_violations(const PathResult& path)
{
    // Entries run from large to small lambda: support should not shrink.
    std::size_t v = 0;
    for (std::size_t i = 1; i < path.entries.size(); ++i) {
        if (path.entries[i].support.size() < path.entries[i - 1].support.size()) ++v;
    }
    return v;
}

RocCurve roc_auc(std::span<const EdgeSet> estimates, const EdgeSet& truth)
{
    if (estimates.empty()) throw InvalidArgument("roc_auc: no estimates");
    const std::size_t total = truth.max_edges();
    const std::size_t pos = truth.size();
    if (pos == 0 || pos == total) throw InvalidArgument("roc_auc: truth needs at least one edge and one non-edge");
    const double neg = static_cast<double>(total - pos);

    RocCurve roc;
    roc.points.push_back({0.0, 0.0});
    for (const auto& est : estimates) {
        if (est.dim() != truth.dim()) throw DimensionMismatch("roc_auc: estimate dimension differs from truth");
        std::size_t tp = 0;
        for (const auto& e : est) {
            if (truth.contains(e.i, e.j)) ++tp;
        }
        const std::size_t fp = est.size() - tp;
        roc.points.push_back({static_cast<double>(fp) / neg,
                              static_cast<double>(tp) / static_cast<double>(pos)});
    }
    roc.points.push_back({1.0, 1.0});
    std::sort(roc.points.begin(), roc.points.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
    });
    double area = 0;
    for (std::size_t i = 1; i < roc.points.size(); ++i) {
        const auto& a = roc.points[i - 1];
        const auto& b = roc.points[i];
        area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
    }
    roc.auc = std::clamp(area, 0.0, 1.0);
    return roc;
}

RocCurve roc_auc(const PathResult& path, const EdgeSet& truth)
{
    std::vector<EdgeSet> sets;
    sets.reserve(path.entries.size());
    for (const auto& e : path.entries) sets.push_back(e.support);
    return roc_auc(sets, truth);
}

OracleSearchResult oracle_lambda_search(const SymMatrix& s, std::size_t target_zeros,
                                        const SolverConfig& config, double threshold)
{
    const std::size_t p = s.dim();
    if (target_zeros > p * (p - 1)) throw InvalidArgument("oracle_lambda_search: target exceeds p(p-1)");
    const double lmax = lambda_max(s);

    OracleSearchResult best;
    bool have_best = false;
    auto evaluate = [&](double lambda) {
        SolverConfig c = config;
        c.lambda = lambda;
        Estimate est = solve(s, c);
        const std::size_t z = count_offdiag_zeros(est.theta_hat, threshold);
        const long long gap = static_cast<long long>(z) - static_cast<long long>(target_zeros);
        ++best.solves;
        if (!have_best || std::llabs(gap) < std::llabs(best.gap)) {
            best.lambda = lambda;
            best.theta = std::move(est.theta_hat);
            best.achieved_zeros = z;
            best.gap = gap;
            best.exact = gap == 0;
            have_best = true;
        }
        return z;
    };

    // At lambda_max the estimate is diagonal.
    if (evaluate(lmax) <= target_zeros || lmax == 0.0) return best;

    double lo = 0.0, hi = lmax;
    const double width = 1e-6 * lmax;
    while (hi - lo >= width) {
        const double mid = 0.5 * (lo + hi);
        const std::size_t z = evaluate(mid);
        if (z == target_zeros) break;
        if (z < target_zeros) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

std::vector<std::vector<std::size_t>> screen_components(const SymMatrix& s, double tau)
{
    if (!(tau >= 0)) throw InvalidArgument("screen_components: tau must be non-negative");
    const std::size_t p = s.dim();
    std::vector<std::size_t> parent(p);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            if (std::abs(s(i, j)) > tau) {
                const std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> slot(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == p) {
            slot[r] = comps.size();
            comps.emplace_back();
        }
        comps[slot[r]].push_back(i);
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return comps;
}

SymMatrix submatrix(const SymMatrix& m, std::span<const std::size_t> idx)
{
    SymMatrix out(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a; b < idx.size(); ++b) out.set(a, b, m(idx[a], idx[b]));
    }
    return out;
}

SymMatrix solve_by_components(const SymMatrix& s, double tau, const SolverConfig& config)
{
    SymMatrix theta(s.dim());
    for (const auto& comp : screen_components(s, tau)) {
        const Estimate est = solve(submatrix(s, comp), config);
        for (std::size_t a = 0; a < comp.size(); ++a) {
            for (std::size_t b = a; b < comp.size(); ++b) theta.set(comp[a], comp[b], est.theta_hat(a, b));
        }
    }
    return theta;
}

} // namespace sglasso
