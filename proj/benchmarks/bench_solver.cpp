#include <benchmark/benchmark.h>

#include <sglasso/evaluation.hpp>
#include <sglasso/solver.hpp>
#include <sglasso/subproblem.hpp>
#include <sglasso/synth.hpp>

#include <map>

namespace {

using namespace sglasso;

// Cached per p so setup stays out of the timed region.
const Dataset& dataset(std::size_t p)
{
    static std::map<std::size_t, Dataset> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        const GroundTruth gt = gen_sparse_precision(p, 0.7, 5);
        it = cache.emplace(p, sample_gaussian(gt, 2 * p, 6)).first;
    }
    return it->second;
}

double mid_lambda(const SymMatrix& s)
{
    const auto grid = lambda_grid(lambda_max(s));
    return grid[grid.size() / 2 - 1];
}

void BM_Solve(benchmark::State& state)
{
    const auto p = static_cast<std::size_t>(state.range(0));
    const Dataset& d = dataset(p);
    SolverConfig c;
    c.lambda = mid_lambda(d.S);
    c.backend = state.range(1) == 0 ? Backend::DualQp : Backend::PrimalCd;
    std::size_t sweeps = 0;
    for (auto _ : state) {
        const Estimate e = solve(d.S, c);
        sweeps = e.trace.sweeps;
        benchmark::DoNotOptimize(e.theta_hat(0, 0));
    }
    state.counters["sweeps"] = static_cast<double>(sweeps);
    state.SetLabel(std::string(to_string(c.backend)));
}
BENCHMARK(BM_Solve)
    ->ArgsProduct({{50, 100, 200}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_Path(benchmark::State& state)
{
    const Dataset& d = dataset(100);
    const auto grid = lambda_grid(lambda_max(d.S));
    const StartMode start = state.range(0) == 0 ? StartMode::Cold : StartMode::Warm;
    for (auto _ : state) {
        const PathResult r = path_solve(d.S, grid, start, SolverConfig{});
        benchmark::DoNotOptimize(r.total_sweeps());
    }
    state.SetLabel(std::string(to_string(start)));
}
BENCHMARK(BM_Path)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// One column subproblem at the cold start, pivot p-1.
struct ColumnFixture : benchmark::Fixture
{
    SymMatrix theta;
    SymMatrix v;
    std::vector<double> s12;
    double lambda = 0;
    double s22 = 0;

    void SetUp(const benchmark::State& state) override
    {
        const auto p = static_cast<std::size_t>(state.range(0));
        const SymMatrix& s = dataset(p).S;
        lambda = mid_lambda(s);
        theta = solve(s, SolverConfig{.lambda = lambda, .max_sweeps = 2}).theta_hat;
        const std::size_t k = p - 1;
        s22 = s(k, k);
        s12.assign(p - 1, 0.0);
        for (std::size_t i = 0; i < k; ++i) s12[i] = s(i, k);
        SymMatrix t11(p - 1);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) t11.set(i, j, theta(i, j));
        v = inverse_spd(chol(t11));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) v.set(i, j, (s22 + lambda) * v(i, j));
    }
};

BENCHMARK_DEFINE_F(ColumnFixture, LassoCd)(benchmark::State& state)
{
    const LassoProblem prob{v, s12, lambda};
    const std::vector<double> beta0(s12.size(), 0.0);
    for (auto _ : state) {
        auto sol = lasso_cd(prob, beta0);
        benchmark::DoNotOptimize(sol.beta.data());
    }
}
BENCHMARK_REGISTER_F(ColumnFixture, LassoCd)->Arg(100)->Arg(400);

BENCHMARK_DEFINE_F(ColumnFixture, BoxQpCd)(benchmark::State& state)
{
    const BoxQpProblem prob{PartitionView(theta, theta.dim() - 1), s12, lambda, s22};
    const std::vector<double> u0(s12.size(), 0.0);
    for (auto _ : state) {
        auto sol = box_qp_cd(prob, u0);
        benchmark::DoNotOptimize(sol.beta.data());
    }
}
BENCHMARK_REGISTER_F(ColumnFixture, BoxQpCd)->Arg(100)->Arg(400);

} // namespace

BENCHMARK_MAIN();
