#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sglasso::cli {

/// Raised for flag combinations CLI11 cannot validate on its own (exit code 2).
struct UsageError
{
    std::string message;
};

struct GenerateOptions
{
    std::string model = "sparse-random";
    std::size_t p = 0;
    std::size_t n = 0;
    double zero_fraction = 0.7;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> data_seed;
    std::string diagonal = "eigen-shift";
    std::string out;
};

struct SolveOptions
{
    std::string s_file;
    double lambda = 0;
    std::string backend = "dual-qp";
    double tol = 1e-4;
    double inner_tol = 0;
    std::size_t max_sweeps = 500;
    std::string warm_start;
    std::optional<double> screen_tau;
    std::string out;
};

struct PathOptions
{
    std::string s_file;
    std::string grid = "auto";
    std::string start = "cold";
    std::string backend = "dual-qp";
    double tol = 1e-4;
    std::size_t max_sweeps = 500;
    std::size_t threads = 1;
    std::string truth;
    bool save_matrices = false;
    std::string out;
};

struct DiagnoseOptions
{
    std::string s_file;
    double lambda = 0;
    std::string backend = "dual-qp";
    std::string algorithm = "sglasso";
    double tol = 1e-4;
    std::size_t max_sweeps = 500;
    std::string out;
};

struct BenchmarkOptions
{
    std::string config;
    std::string out;
};

int cmd_generate(const GenerateOptions& o);
int cmd_solve(const SolveOptions& o);
int cmd_path(const PathOptions& o);
int cmd_diagnose(const DiagnoseOptions& o);
int cmd_benchmark(const BenchmarkOptions& o);

/// "auto" or a comma-separated strictly decreasing list; throws UsageError otherwise.
std::vector<double> parse_grid_list(const std::string& text);

} // namespace sglasso::cli
