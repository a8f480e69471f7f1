#include <sglasso/matrix_io.hpp>
#include <sglasso/sym_matrix.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using sglasso::SymMatrix;

namespace {

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("sglasso_cli_") + info->name() + "_"
                                             + std::to_string(std::random_device{}()));
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    fs::path dir(const std::string& name) const { return root_ / name; }

    int run(const std::string& args) const
    {
        const std::string cmd = std::string(SGLASSO_CLI_PATH) + " " + args + " >" + (root_ / "stdout").string()
                                + " 2>" + (root_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static json load_json(const fs::path& p) { return json::parse(sglasso::read_text(p)); }

    static std::vector<std::vector<std::string>> load_csv(const fs::path& p)
    {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(sglasso::read_text(p));
        for (std::string line; std::getline(in, line);) {
            std::vector<std::string> row;
            std::istringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
            rows.push_back(row);
        }
        return rows;
    }

    void write(const fs::path& p, const std::string& text) const { std::ofstream(p) << text; }

    /// sparse-random p=20, n=40 dataset under dir("data").
    fs::path small_dataset()
    {
        EXPECT_EQ(run("generate --p 20 --n 40 --seed 3 --out " + dir("data").string()), 0);
        return dir("data") / "S.csv";
    }

    fs::path root_;
};

TEST_F(CliTest, GenerateAr2HasBandedEntries)
{
    ASSERT_EQ(run("generate --model ar2 --p 5 --n 10 --out " + dir("g").string()), 0);
    const SymMatrix t = sglasso::read_matrix_csv(dir("g") / "theta_star.csv");
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(t(i, i), 1.0);
        if (i + 1 < 5) EXPECT_EQ(t(i, i + 1), 0.5);
        if (i + 2 < 5) EXPECT_EQ(t(i, i + 2), 0.25);
        if (i + 3 < 5) EXPECT_EQ(t(i, i + 3), 0.0);
    }
    const json edges = load_json(dir("g") / "edges.json");
    EXPECT_EQ(edges.size(), 7u);
    const json manifest = load_json(dir("g") / "manifest.json");
    EXPECT_EQ(manifest["command"], "generate");
    EXPECT_EQ(manifest["exit_code"], 0);
    EXPECT_EQ(manifest["seeds"]["data_seed"], 2);
}

TEST_F(CliTest, GenerateIsReproducible)
{
    const std::string args = "generate --p 15 --n 30 --seed 7 --zero-fraction 0.6 --out ";
    ASSERT_EQ(run(args + dir("a").string()), 0);
    ASSERT_EQ(run(args + dir("b").string()), 0);
    for (const char* f : {"theta_star.csv", "sigma.csv", "Y.csv", "S.csv", "edges.json", "meta.json"}) {
        EXPECT_EQ(sglasso::read_text(dir("a") / f), sglasso::read_text(dir("b") / f)) << f;
    }
}

TEST_F(CliTest, DefaultOutputDirectoryUsesEnvironment)
{
    const std::string env = "SGLASSO_OUT_DIR=" + dir("runs").string() + " ";
    const std::string cmd = env + SGLASSO_CLI_PATH + " generate --p 4 --n 5 >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(dir("runs"))) {
        EXPECT_TRUE(fs::exists(e.path() / "manifest.json"));
        ++count;
    }
    EXPECT_EQ(count, 2u);
}

TEST_F(CliTest, ZeroFractionOutOfRangeIsUsageError)
{
    EXPECT_EQ(run("generate --p 10 --n 10 --zero-fraction 1.2 --out " + dir("g").string()), 2);
    EXPECT_EQ(run("generate --p 10 --out " + dir("g").string()), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(CliTest, SolveAboveLambdaMaxIsDiagonal)
{
    const fs::path s = small_dataset();
    const double lmax = load_json(dir("data") / "meta.json")["lambda_max"];
    std::ostringstream lam;
    lam.precision(17);
    lam << lmax * 1.01;
    ASSERT_EQ(run("solve --S " + s.string() + " --lambda " + lam.str() + " --out " + dir("s").string()), 0);
    const SymMatrix t = sglasso::read_matrix_csv(dir("s") / "theta_hat.csv");
    const SymMatrix sm = sglasso::read_matrix_csv(s);
    for (std::size_t i = 0; i < t.dim(); ++i) {
        EXPECT_NEAR(t(i, i), 1.0 / (sm(i, i) + lmax * 1.01), 1e-12);
        for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(t(i, j), 0.0);
    }
    EXPECT_EQ(load_json(dir("s") / "kkt.json")["edges"], 0);
}

TEST_F(CliTest, SolveIdentityAtZeroPenalty)
{
    write(dir("I.csv"), "1,0,0\n0,1,0\n0,0,1\n");
    ASSERT_EQ(run("solve --S " + dir("I.csv").string() + " --lambda 0 --out " + dir("s").string()), 0);
    const SymMatrix t = sglasso::read_matrix_csv(dir("s") / "theta_hat.csv");
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(t(i, j), i == j ? 1.0 : 0.0, 1e-12);
}

TEST_F(CliTest, SolveWarmStartFromSolutionIsQuick)
{
    const fs::path s = small_dataset();
    const std::string base = "solve --S " + s.string() + " --lambda 0.1 --tol 1e-8 --out ";
    ASSERT_EQ(run(base + dir("first").string()), 0);
    ASSERT_EQ(run(base + dir("second").string() + " --warm-start " + (dir("first") / "theta_hat.csv").string()), 0);
    EXPECT_LE(load_json(dir("second") / "kkt.json")["sweeps"].get<int>(), 2);
    EXPECT_LE(load_json(dir("first") / "kkt.json")["stationarity_residual"].get<double>(), 1e-3);
}

TEST_F(CliTest, SolveWithScreeningWritesComponents)
{
    const fs::path s = small_dataset();
    ASSERT_EQ(run("solve --S " + s.string() + " --lambda 0.3 --screen-tau 0.3 --out " + dir("s").string()), 0);
    const json comps = load_json(dir("s") / "components.json");
    std::size_t members = 0;
    for (const auto& c : comps["components"]) members += c["members"].size();
    EXPECT_EQ(members, 20u);
}

TEST_F(CliTest, SolveMissingFileIsUsageError)
{
    EXPECT_EQ(run("solve --S " + dir("nope.csv").string() + " --lambda 1"), 2);
}

TEST_F(CliTest, SolveMalformedCsvIsRuntimeError)
{
    write(dir("bad.csv"), "1,2\n3\n");
    EXPECT_EQ(run("solve --S " + dir("bad.csv").string() + " --lambda 1 --out " + dir("s").string()), 1);
    EXPECT_TRUE(fs::exists(dir("s") / "error.json"));
    EXPECT_EQ(load_json(dir("s") / "manifest.json")["exit_code"], 1);
}

TEST_F(CliTest, PathAutoGridStartsAtNinetyPercent)
{
    write(dir("S.csv"), "2,-1\n-1,2\n");
    ASSERT_EQ(run("path --S " + dir("S.csv").string() + " --out " + dir("p").string()), 0);
    const json r = load_json(dir("p") / "results.json");
    EXPECT_EQ(r["lambda_max"].get<double>(), 1.0);
    ASSERT_EQ(r["grid"].size(), 20u);
    EXPECT_NEAR(r["grid"][0].get<double>(), 0.72, 1e-12);
    EXPECT_NEAR(r["grid"][1].get<double>(), 0.576, 1e-12);
}

TEST_F(CliTest, PathWarmNeedsNoMoreSweepsThanCold)
{
    const fs::path s = small_dataset();
    const std::string base = "path --S " + s.string() + " --truth " + (dir("data") / "edges.json").string();
    ASSERT_EQ(run(base + " --start cold --threads 2 --out " + dir("cold").string()), 0);
    ASSERT_EQ(run(base + " --start warm --out " + dir("warm").string()), 0);
    const json cold = load_json(dir("cold") / "results.json");
    const json warm = load_json(dir("warm") / "results.json");
    EXPECT_LE(warm["total_sweeps"].get<int>(), cold["total_sweeps"].get<int>());
    EXPECT_GT(cold["auc"].get<double>(), 0.5);
    EXPECT_TRUE(fs::exists(dir("cold") / "roc.csv"));
}

TEST_F(CliTest, PathEmptyGridIsUsageError)
{
    write(dir("S.csv"), "2,0.8\n0.8,2\n");
    EXPECT_EQ(run("path --S " + dir("S.csv").string() + " --grid ,"), 2);
    EXPECT_EQ(run("path --S " + dir("S.csv").string() + " --grid 0.1,0.2"), 2);
}

TEST_F(CliTest, PathExplicitGridSavesMatrices)
{
    const fs::path s = small_dataset();
    ASSERT_EQ(run("path --S " + s.string() + " --grid 0.5,0.2,0.1 --save-matrices --out " + dir("p").string()), 0);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(fs::exists(dir("p") / ("theta_" + std::to_string(i) + ".csv")));
    EXPECT_EQ(load_json(dir("p") / "results.json")["entries"].size(), 3u);
}

TEST_F(CliTest, DiagnoseTraceIsMonotone)
{
    const fs::path s = small_dataset();
    ASSERT_EQ(run("diagnose --S " + s.string() + " --lambda 0.1 --out " + dir("d").string()), 0);
    const auto rows = load_csv(dir("d") / "diagnostics.csv");
    ASSERT_GE(rows.size(), 3u);
    EXPECT_EQ(rows[0][2], "objective_delta");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (i > 1) {
            EXPECT_LE(std::stod(rows[i][2]), 1e-12 * std::abs(std::stod(rows[i - 1][1])));
        }
        EXPECT_GT(std::stod(rows[i][3]), 0.0);
    }
}

TEST_F(CliTest, DiagnoseGlassoRuns)
{
    const fs::path s = small_dataset();
    ASSERT_EQ(run("diagnose --S " + s.string() + " --lambda 0.1 --algorithm glasso --out " + dir("d").string()), 0);
    EXPECT_GE(load_csv(dir("d") / "diagnostics.csv").size(), 3u);
}

TEST_F(CliTest, ZeroSweepsRecordsOnlyStartAndExitsNotConverged)
{
    const fs::path s = small_dataset();
    EXPECT_EQ(run("solve --S " + s.string() + " --lambda 0.1 --max-sweeps 0 --out " + dir("s").string()), 3);
    const auto rows = load_csv(dir("s") / "trace.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][0], "0");
}

TEST_F(CliTest, BenchmarkSingleCell)
{
    write(dir("cfg.json"),
          R"({"cells": [{"p": 12, "n": [20, 40], "seeds": [1, 2]}],
              "backends": ["dual-qp", "primal-cd"], "threads": 2})");
    ASSERT_EQ(run("benchmark --config " + dir("cfg.json").string() + " --out " + dir("b").string()), 0);
    const json rep = load_json(dir("b") / "report.json");
    ASSERT_EQ(rep["cells"].size(), 2u);
    for (const auto& c : rep["cells"]) {
        EXPECT_EQ(c["status"], "ok");
        EXPECT_EQ(c["backends"]["dual-qp"]["auc"].size(), 2u);
        EXPECT_LE(c["backend_shd"].get<int>(), 4);
    }
    const auto table = load_csv(dir("b") / "auc_table.csv");
    ASSERT_EQ(table.size(), 3u);
    EXPECT_EQ(table[0][2], "auc_dual-qp");
}

TEST_F(CliTest, BenchmarkBadCellIsRecorded)
{
    write(dir("cfg.json"), R"({"cells": [{"p": 8, "n": 16}, {"p": 8, "n": 16, "model": "bogus"}]})");
    EXPECT_EQ(run("benchmark --config " + dir("cfg.json").string() + " --out " + dir("b").string()), 1);
    const json rep = load_json(dir("b") / "report.json");
    ASSERT_EQ(rep["cells"].size(), 2u);
    EXPECT_EQ(rep["cells"][0]["status"], "ok");
    EXPECT_EQ(rep["cells"][1]["status"], "failed");
    EXPECT_EQ(load_csv(dir("b") / "auc_table.csv").size(), 2u);
}

} // namespace
