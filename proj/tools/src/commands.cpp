#include "commands.hpp"
#include "run.hpp"

#include <sglasso/error.hpp>
#include <sglasso/evaluation.hpp>
#include <sglasso/glasso.hpp>
#include <sglasso/matrix_io.hpp>
#include <sglasso/solver.hpp>
#include <sglasso/synth.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace sglasso::cli {

namespace {

std::string num(double v)
{
    return std::isnan(v) ? "nan" : format_double(v);
}

// Maps library and I/O failures onto error.json + exit code 1.
template <class Body>
int guarded(Run& run, Body&& body)
{
    try {
        return run.finish(body());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return run.fail(e.kind(), e.what());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return run.fail("invalid_json", e.what());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return run.fail("error", e.what());
    }
}

SolverConfig make_config(double lambda, const std::string& backend, double tol, std::size_t max_sweeps)
{
    SolverConfig c;
    c.lambda = lambda;
    c.backend = parse_backend(backend);
    c.outer_tol = tol;
    c.max_sweeps = max_sweeps;
    return c;
}

std::string trace_csv(const SolveTrace& t, bool with_component = false, std::size_t component = 0)
{
    std::ostringstream os;
    if (!with_component || component == 0) {
        if (with_component) os << "component,";
        os << "sweep,objective,min_eig,max_rel_change,rel_change\n";
    }
    for (const auto& r : t.records) {
        if (with_component) os << component << ',';
        os << r.sweep << ',' << num(r.objective) << ',' << num(r.min_eig) << ',' << num(r.max_rel_change) << ','
           << num(r.rel_change) << '\n';
    }
    return os.str();
}

json edges_json(const EdgeSet& e)
{
    json a = json::array();
    for (const auto& [i, j] : e.pairs()) a.push_back({i, j});
    return a;
}

EdgeSet edges_from_json(const json& j, std::size_t p)
{
    EdgeSet e(p);
    for (const auto& pair : j) e.insert(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
    return e;
}

std::string roc_csv(const RocCurve& roc)
{
    std::ostringstream os;
    os << "fpr,tpr\n";
    for (const auto& pt : roc.points) os << num(pt.fpr) << ',' << num(pt.tpr) << '\n';
    return os.str();
}

} // namespace

std::vector<double> parse_grid_list(const std::string& text)
{
    std::vector<double> grid;
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view tok = rest.substr(0, comma);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (!tok.empty()) {
            double v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !(v >= 0) || !std::isfinite(v)) {
                throw UsageError{"--grid: cannot parse '" + std::string(tok) + "' as a non-negative number"};
            }
            grid.push_back(v);
        }
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (grid.empty()) throw UsageError{"--grid: the lambda list is empty"};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1])) throw UsageError{"--grid: values must be strictly decreasing"};
    }
    return grid;
}

int cmd_generate(const GenerateOptions& o)
{
    const Model model = parse_model(o.model);
    const DiagonalRule rule = parse_diagonal_rule(o.diagonal);
    if (model == Model::Ar2 && o.p < 3) throw UsageError{"--p must be at least 3 for the ar2 model"};
    if (o.p < 2) throw UsageError{"--p must be at least 2"};
    if (o.n < 2) throw UsageError{"--n must be at least 2"};
    const std::uint64_t data_seed = o.data_seed.value_or(o.seed + 1);

    json flags = {{"model", o.model}, {"p", o.p}, {"n", o.n}, {"zero_fraction", o.zero_fraction},
                  {"diagonal", o.diagonal}};
    Run run("generate", flags, {{"seed", o.seed}, {"data_seed", data_seed}}, o.out);
    return guarded(run, [&] {
        const GroundTruth gt = model == Model::Ar2 ? gen_ar2_precision(o.p)
                                                   : gen_sparse_precision(o.p, o.zero_fraction, o.seed, rule);
        const Dataset d = sample_gaussian(gt, o.n, data_seed);
        run.write_text("theta_star.csv", to_csv(gt.theta_star, "theta_star"));
        run.write_text("sigma.csv", to_csv(inverse_spd(chol(gt.theta_star)), "sigma"));
        run.write_text("Y.csv", to_csv(d.Y, "Y"));
        run.write_text("S.csv", to_csv(d.S, "S"));
        run.write_json("edges.json", edges_json(gt.edges));
        json meta = {{"model", to_string(model)},
                     {"p", o.p},
                     {"n", o.n},
                     {"seed", o.seed},
                     {"data_seed", data_seed},
                     {"zero_fraction_target", model == Model::Ar2 ? json(nullptr) : json(o.zero_fraction)},
                     {"zero_fraction", gt.zero_fraction},
                     {"edges", gt.edges.size()},
                     {"diagonal", model == Model::Ar2 ? json(nullptr) : json(to_string(rule))},
                     {"lambda_max", lambda_max(d.S)}};
        run.write_json("meta.json", meta);
        std::cout << run.dir().string() << "\n";
        return int(kOk);
    });
}

int cmd_solve(const SolveOptions& o)
{
    json flags = {{"S", o.s_file},       {"lambda", o.lambda},         {"backend", o.backend},
                  {"tol", o.tol},        {"max_sweeps", o.max_sweeps}, {"inner_tol", o.inner_tol},
                  {"warm_start", o.warm_start}, {"screen_tau", o.screen_tau ? json(*o.screen_tau) : json(nullptr)}};
    Run run("solve", flags, json::object(), o.out);
    return guarded(run, [&] {
        run.add_input("S", o.s_file);
        const SymMatrix s = read_matrix_csv(o.s_file);
        SolverConfig c = make_config(o.lambda, o.backend, o.tol, o.max_sweeps);
        c.record_diagnostics = true;
        if (o.inner_tol > 0) c.inner_tol = o.inner_tol;

        SymMatrix theta;
        bool converged = true, inner_converged = true;
        std::size_t sweeps = 0;
        if (o.screen_tau) {
            if (!o.warm_start.empty()) throw InvalidArgument("--warm-start cannot be combined with --screen-tau");
            const auto comps = screen_components(s, *o.screen_tau);
            theta = SymMatrix(s.dim());
            std::string trace;
            json cj = json::array();
            for (std::size_t ci = 0; ci < comps.size(); ++ci) {
                const Estimate e = solve(submatrix(s, comps[ci]), c);
                for (std::size_t a = 0; a < comps[ci].size(); ++a)
                    for (std::size_t b = a; b < comps[ci].size(); ++b)
                        theta.set(comps[ci][a], comps[ci][b], e.theta_hat(a, b));
                converged = converged && e.trace.converged;
                inner_converged = inner_converged && e.trace.inner_converged;
                sweeps = std::max(sweeps, e.trace.sweeps);
                trace += trace_csv(e.trace, true, ci);
                cj.push_back({{"id", ci}, {"members", comps[ci]}, {"sweeps", e.trace.sweeps},
                              {"converged", e.trace.converged}});
            }
            run.write_text("trace.csv", trace);
            run.write_json("components.json", {{"tau", *o.screen_tau}, {"components", cj}});
        } else {
            std::optional<SymMatrix> warm;
            if (!o.warm_start.empty()) {
                run.add_input("warm_start", o.warm_start);
                warm = read_matrix_csv(o.warm_start);
            }
            Estimate e = warm ? solve(s, c, *warm) : solve(s, c);
            converged = e.trace.converged;
            inner_converged = e.trace.inner_converged;
            sweeps = e.trace.sweeps;
            run.write_text("trace.csv", trace_csv(e.trace));
            theta = std::move(e.theta_hat);
        }
        run.write_text("theta_hat.csv", to_csv(theta, "theta_hat"));
        json kkt = {{"lambda", o.lambda},
                    {"stationarity_residual", check_stationarity(theta, s, o.lambda)},
                    {"zero_threshold", kZeroThreshold},
                    {"objective", objective(theta, s, o.lambda)},
                    {"sweeps", sweeps},
                    {"converged", converged},
                    {"inner_converged", inner_converged},
                    {"edges", support_edges(theta).size()}};
        run.write_json("kkt.json", kkt);
        std::cout << run.dir().string() << "\n";
        if (!converged) std::cerr << "warning: solver stopped at max_sweeps without converging\n";
        return int(converged ? kOk : kNotConverged);
    });
}

int cmd_path(const PathOptions& o)
{
    const StartMode start = parse_start_mode(o.start);
    const bool auto_grid = o.grid == "auto";
    std::vector<double> grid;
    if (!auto_grid) grid = parse_grid_list(o.grid);
    if (o.threads == 0) throw UsageError{"--threads must be positive"};

    json flags = {{"S", o.s_file},     {"grid", o.grid},          {"start", o.start},
                  {"backend", o.backend}, {"tol", o.tol},         {"max_sweeps", o.max_sweeps},
                  {"threads", o.threads}, {"truth", o.truth},     {"save_matrices", o.save_matrices}};
    Run run("path", flags, json::object(), o.out);
    return guarded(run, [&] {
        run.add_input("S", o.s_file);
        const SymMatrix s = read_matrix_csv(o.s_file);
        const double lmax = lambda_max(s);
        if (auto_grid) grid = lambda_grid(lmax);
        const SolverConfig c = make_config(0, o.backend, o.tol, o.max_sweeps);
        const PathResult path = path_solve(s, grid, start, c, o.threads);

        json entries = json::array();
        for (std::size_t i = 0; i < path.entries.size(); ++i) {
            const auto& e = path.entries[i];
            entries.push_back({{"index", i},
                               {"lambda", e.lambda},
                               {"sweeps", e.sweeps},
                               {"inner_iters", e.inner_iters},
                               {"wall_seconds", e.wall_seconds},
                               {"converged", e.converged},
                               {"edges", e.support.size()}});
            if (o.save_matrices) run.write_text("theta_" + std::to_string(i) + ".csv", to_csv(e.theta, "theta_hat"));
        }
        json results = {{"lambda_max", lmax},
                        {"grid", grid},
                        {"start", to_string(start)},
                        {"backend", to_string(path.backend)},
                        {"total_sweeps", path.total_sweeps()},
                        {"all_converged", path.all_converged()},
                        {"support_monotonicity_violations", support_monotonicity_violations(path)},
                        {"entries", entries}};
        if (!o.truth.empty()) {
            run.add_input("truth", o.truth);
            const EdgeSet truth = edges_from_json(json::parse(read_text(o.truth)), s.dim());
            const RocCurve roc = roc_auc(path, truth);
            results["auc"] = roc.auc;
            run.write_text("roc.csv", roc_csv(roc));
        }
        run.write_json("results.json", results);
        std::cout << run.dir().string() << "\n";
        return int(path.all_converged() ? kOk : kNotConverged);
    });
}

int cmd_diagnose(const DiagnoseOptions& o)
{
    if (o.algorithm != "sglasso" && o.algorithm != "glasso") {
        throw UsageError{"--algorithm must be sglasso or glasso"};
    }
    json flags = {{"S", o.s_file}, {"lambda", o.lambda},   {"backend", o.backend},
                  {"algorithm", o.algorithm}, {"tol", o.tol}, {"max_sweeps", o.max_sweeps}};
    Run run("diagnose", flags, json::object(), o.out);
    return guarded(run, [&] {
        run.add_input("S", o.s_file);
        const SymMatrix s = read_matrix_csv(o.s_file);
        SolverConfig c = make_config(o.lambda, o.backend, o.tol, o.max_sweeps);
        c.record_diagnostics = true;
        const SolveTrace trace = o.algorithm == "glasso" ? glasso_solve(s, c).trace : solve(s, c).trace;

        std::ostringstream os;
        os << "sweep,objective,objective_delta,min_eig,rel_change,max_rel_change\n";
        for (std::size_t i = 0; i < trace.records.size(); ++i) {
            const auto& r = trace.records[i];
            const double delta = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : r.objective - trace.records[i - 1].objective;
            os << r.sweep << ',' << num(r.objective) << ',' << num(delta) << ',' << num(r.min_eig) << ','
               << num(r.rel_change) << ',' << num(r.max_rel_change) << '\n';
        }
        run.write_text("diagnostics.csv", os.str());
        std::cout << run.dir().string() << "\n";
        return int(trace.converged ? kOk : kNotConverged);
    });
}

namespace {

struct BenchCell
{
    std::string model = "sparse-random";
    std::size_t p = 0;
    std::size_t n = 0;
    double zero_fraction = 0.7;
    std::string diagonal = "eigen-shift";
    std::vector<std::uint64_t> seeds;
};

struct BenchSettings
{
    std::vector<Backend> backends;
    StartMode start = StartMode::Cold;
    std::optional<std::vector<double>> grid;
    SolverConfig config;
};

std::vector<std::size_t> as_list(const json& j)
{
    if (j.is_array()) return j.get<std::vector<std::size_t>>();
    return {j.get<std::size_t>()};
}

std::vector<BenchCell> parse_cells(const json& cfg)
{
    std::vector<BenchCell> cells;
    for (const auto& c : cfg.at("cells")) {
        std::vector<std::uint64_t> seeds;
        if (c.contains("seeds")) {
            seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
        } else {
            seeds = {c.value("seed", std::uint64_t{1})};
        }
        if (seeds.empty()) throw InvalidArgument("benchmark cell has an empty seed list");
        for (std::size_t p : as_list(c.at("p"))) {
            for (std::size_t n : as_list(c.at("n"))) {
                BenchCell b;
                b.model = c.value("model", std::string("sparse-random"));
                b.p = p;
                b.n = n;
                b.zero_fraction = c.value("zero_fraction", 0.7);
                b.diagonal = c.value("diagonal", std::string("eigen-shift"));
                b.seeds = seeds;
                cells.push_back(b);
            }
        }
    }
    return cells;
}

json run_cell(const BenchCell& cell, const BenchSettings& st, bool& converged)
{
    const Model model = parse_model(cell.model);
    const DiagonalRule rule = parse_diagonal_rule(cell.diagonal);
    json out = {{"model", cell.model}, {"p", cell.p}, {"n", cell.n}, {"zero_fraction", cell.zero_fraction},
                {"diagonal", cell.diagonal}, {"seeds", cell.seeds}};
    json per_backend = json::object();
    std::vector<double> auc_sum(st.backends.size(), 0.0);
    std::size_t max_shd = 0;
    for (const auto b : st.backends) {
        per_backend[std::string(to_string(b))] = {{"auc", json::array()}, {"total_sweeps", json::array()},
                                                  {"wall_seconds", json::array()}, {"converged", true}};
    }
    for (const std::uint64_t seed : cell.seeds) {
        const GroundTruth gt = model == Model::Ar2 ? gen_ar2_precision(cell.p)
                                                        : gen_sparse_precision(cell.p, cell.zero_fraction, seed, rule);
        const Dataset d = sample_gaussian(gt, cell.n, seed + 1);
        const std::vector<double> grid = st.grid ? *st.grid : lambda_grid(lambda_max(d.S));
        std::vector<PathResult> paths;
        for (std::size_t bi = 0; bi < st.backends.size(); ++bi) {
            SolverConfig c = st.config;
            c.backend = st.backends[bi];
            paths.push_back(path_solve(d.S, grid, st.start, c));
            const PathResult& path = paths.back();
            json& slot = per_backend[std::string(to_string(c.backend))];
            const double auc = roc_auc(path, gt.edges).auc;
            auc_sum[bi] += auc;
            double wall = 0;
            for (const auto& e : path.entries) wall += e.wall_seconds;
            slot["auc"].push_back(auc);
            slot["total_sweeps"].push_back(path.total_sweeps());
            slot["wall_seconds"].push_back(wall);
            if (!path.all_converged()) {
                slot["converged"] = false;
                converged = false;
            }
        }
        for (std::size_t bi = 1; bi < paths.size(); ++bi)
            for (std::size_t i = 0; i < grid.size(); ++i)
                max_shd = std::max(max_shd, shd(paths[0].entries[i].support, paths[bi].entries[i].support));
    }
    for (std::size_t bi = 0; bi < st.backends.size(); ++bi) {
        per_backend[std::string(to_string(st.backends[bi]))]["auc_mean"]
            = auc_sum[bi] / static_cast<double>(cell.seeds.size());
    }
    out["backends"] = per_backend;
    out["backend_shd"] = max_shd;
    out["status"] = "ok";
    return out;
}

} // namespace

int cmd_benchmark(const BenchmarkOptions& o)
{
    Run run("benchmark", {{"config", o.config}}, json::object(), o.out);
    return guarded(run, [&] {
        run.add_input("config", o.config);
        const json cfg = json::parse(read_text(o.config));
        const std::vector<BenchCell> cells = parse_cells(cfg);

        BenchSettings st;
        for (const auto& b : cfg.value("backends", std::vector<std::string>{"dual-qp"})) {
            st.backends.push_back(parse_backend(b));
        }
        if (st.backends.empty()) throw InvalidArgument("benchmark config lists no backends");
        st.start = parse_start_mode(cfg.value("start", std::string("cold")));
        if (cfg.contains("grid") && cfg["grid"].is_array()) {
            st.grid = cfg["grid"].get<std::vector<double>>();
        } else if (cfg.contains("grid") && cfg["grid"] != "auto") {
            throw InvalidArgument("benchmark grid must be \"auto\" or a list of lambda values");
        }
        st.config.outer_tol = cfg.value("tol", 1e-4);
        st.config.max_sweeps = cfg.value("max_sweeps", std::size_t{500});
        const std::size_t threads = std::max<std::size_t>(1, cfg.value("threads", std::size_t{1}));

        std::vector<json> results(cells.size());
        std::vector<char> ok(cells.size(), 1), conv(cells.size(), 1);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
                bool c = true;
                try {
                    results[i] = run_cell(cells[i], st, c);
                } catch (const std::exception& e) {
                    results[i] = {{"model", cells[i].model}, {"p", cells[i].p}, {"n", cells[i].n},
                                  {"status", "failed"}, {"error", e.what()}};
                    ok[i] = 0;
                }
                conv[i] = c;
            }
        };
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 1; t < std::min(threads, cells.size()); ++t) pool.emplace_back(work);
            work();
        }

        std::ostringstream table;
        table << "p,n";
        for (const auto b : st.backends) table << ",auc_" << to_string(b);
        table << ",backend_shd\n";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!ok[i]) continue;
            table << cells[i].p << ',' << cells[i].n;
            for (const auto b : st.backends)
                table << ',' << num(results[i]["backends"][std::string(to_string(b))]["auc_mean"].get<double>());
            table << ',' << results[i]["backend_shd"].get<std::size_t>() << '\n';
        }
        run.write_json("report.json", {{"start", to_string(st.start)}, {"cells", results}});
        run.write_text("auc_table.csv", table.str());
        std::cout << run.dir().string() << "\n";

        const bool all_ok = std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
        const bool all_conv = std::all_of(conv.begin(), conv.end(), [](char v) { return v != 0; });
        if (!all_ok) {
            std::cerr << "error: some benchmark cells failed; see report.json\n";
            return int(kRuntimeError);
        }
        return int(all_conv ? kOk : kNotConverged);
    });
}

} // namespace sglasso::cli
