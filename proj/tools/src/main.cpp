#include "commands.hpp"
#include "run.hpp"

#include <CLI11.hpp>
#include <sglasso/error.hpp>

#include <iostream>

using namespace sglasso::cli;

namespace {

void add_positive(CLI::App* cmd, const std::string& flag, double& v, const std::string& help)
{
    cmd->add_option(flag, v, help)->check(CLI::PositiveNumber)->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse inverse covariance estimation by primal block coordinate descent"};
    app.set_version_flag("--version", std::string(SGLASSO_VERSION));
    app.require_subcommand(1);

    const std::vector<std::string> backends{"dual-qp", "primal-cd"};

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Draw a ground-truth precision matrix and Gaussian samples");
    g->add_option("--model", gen.model, "sparse-random or ar2")
        ->check(CLI::IsMember({"sparse-random", "ar2"}))
        ->capture_default_str();
    g->add_option("--p", gen.p, "Dimension")->required()->check(CLI::PositiveNumber);
    g->add_option("--n", gen.n, "Sample count")->required()->check(CLI::PositiveNumber);
    g->add_option("--zero-fraction", gen.zero_fraction, "Target share of zero off-diagonal pairs")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    g->add_option("--seed", gen.seed, "Seed for the precision matrix")->capture_default_str();
    g->add_option("--data-seed", gen.data_seed, "Seed for the samples (default: seed + 1)");
    g->add_option("--diagonal", gen.diagonal, "Diagonal rule for sparse-random: eigen-shift or dominance")
        ->check(CLI::IsMember({"eigen-shift", "dominance"}))
        ->capture_default_str();
    g->add_option("--out", gen.out, "Output directory");

    SolveOptions sol;
    auto* s = app.add_subcommand("solve", "Estimate the precision matrix at one lambda");
    s->add_option("--S", sol.s_file, "Sample covariance CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--lambda", sol.lambda, "Penalty")->required()->check(CLI::NonNegativeNumber);
    s->add_option("--backend", sol.backend, "Column subproblem solver")
        ->check(CLI::IsMember(backends))
        ->capture_default_str();
    add_positive(s, "--tol", sol.tol, "Outer relative Frobenius tolerance");
    s->add_option("--inner-tol", sol.inner_tol, "Inner coordinate descent tolerance (0: library default)")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--max-sweeps", sol.max_sweeps, "Sweep limit")->capture_default_str();
    s->add_option("--warm-start", sol.warm_start, "Starting precision matrix CSV")->check(CLI::ExistingFile);
    s->add_option("--screen-tau", sol.screen_tau, "Split into components of |S_ij| > tau and solve each")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--out", sol.out, "Output directory");

    PathOptions pth;
    auto* pa = app.add_subcommand("path", "Estimate along a decreasing lambda grid");
    pa->add_option("--S", pth.s_file, "Sample covariance CSV")->required()->check(CLI::ExistingFile);
    pa->add_option("--grid", pth.grid, "auto or a comma-separated decreasing list")->capture_default_str();
    pa->add_option("--start", pth.start, "cold or warm")
        ->check(CLI::IsMember({"cold", "warm"}))
        ->capture_default_str();
    pa->add_option("--backend", pth.backend, "Column subproblem solver")
        ->check(CLI::IsMember(backends))
        ->capture_default_str();
    add_positive(pa, "--tol", pth.tol, "Outer relative Frobenius tolerance");
    pa->add_option("--max-sweeps", pth.max_sweeps, "Sweep limit per lambda")->capture_default_str();
    pa->add_option("--threads", pth.threads, "Worker threads for cold paths")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    pa->add_option("--truth", pth.truth, "edges.json of the true graph, enables ROC output")
        ->check(CLI::ExistingFile);
    pa->add_flag("--save-matrices", pth.save_matrices, "Write theta_<i>.csv per grid point");
    pa->add_option("--out", pth.out, "Output directory");

    DiagnoseOptions dia;
    auto* d = app.add_subcommand("diagnose", "Per-sweep objective and eigenvalue trace");
    d->add_option("--S", dia.s_file, "Sample covariance CSV")->required()->check(CLI::ExistingFile);
    d->add_option("--lambda", dia.lambda, "Penalty")->required()->check(CLI::NonNegativeNumber);
    d->add_option("--algorithm", dia.algorithm, "sglasso or glasso")
        ->check(CLI::IsMember({"sglasso", "glasso"}))
        ->capture_default_str();
    d->add_option("--backend", dia.backend, "Column subproblem solver")
        ->check(CLI::IsMember(backends))
        ->capture_default_str();
    add_positive(d, "--tol", dia.tol, "Outer relative tolerance");
    d->add_option("--max-sweeps", dia.max_sweeps, "Sweep limit")->capture_default_str();
    d->add_option("--out", dia.out, "Output directory");

    BenchmarkOptions ben;
    auto* b = app.add_subcommand("benchmark", "Run a JSON-configured grid of synthetic experiments");
    b->add_option("--config", ben.config, "Benchmark config JSON")->required()->check(CLI::ExistingFile);
    b->add_option("--out", ben.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : int(kUsageError);
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*s) return cmd_solve(sol);
        if (*pa) return cmd_path(pth);
        if (*d) return cmd_diagnose(dia);
        if (*b) return cmd_benchmark(ben);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.message << "\n";
        return kUsageError;
    } catch (const sglasso::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kUsageError;
}
