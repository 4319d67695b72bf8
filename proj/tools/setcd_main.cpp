#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <setcd/error.hpp>
#include <setcd/experiment.hpp>
#include <setcd/io.hpp>
#include <setcd/rate.hpp>
#include <setcd/verify.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace setcd;

namespace {

struct Globals
{
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> iterations;
    std::optional<int> seeds;
    unsigned threads = 0;
    json config = json::object();

    std::uint64_t seed_or(std::uint64_t fallback) const
    {
        return seed.value_or(config.value("seed", fallback));
    }
    std::int64_t iterations_or(std::int64_t fallback) const
    {
        return iterations.value_or(config.value("iterations", fallback));
    }
    int seeds_or(int fallback) const { return seeds.value_or(config.value("seeds", fallback)); }
    std::string out() const { return out_dir.empty() ? config.value("out", std::string{}) : out_dir; }
};

template <class T>
T pick(const std::optional<T>& flag, const json& config, const char* key, T fallback)
{
    if (flag) return *flag;
    return config.value(key, fallback);
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Writes to <out>/<name> when --out is set, and always echoes to stdout.
void emit(const Globals& g, const std::string& name, const json& j)
{
    std::cout << j.dump(2) << '\n';
    if (const auto out = g.out(); !out.empty()) {
        fs::create_directories(out);
        write_json_file(fs::path(out) / name, j);
    }
}

void write_traces(const fs::path& dir, const std::string& prefix, const std::vector<Trace>& traces)
{
    for (const auto& t : traces) {
        const std::string stem = prefix + std::string(to_string(t.rule)) + "_seed" + std::to_string(t.seed);
        std::ofstream csv(dir / (stem + ".csv"));
        write_trace_csv(csv, t);
        write_json_file(dir / (stem + ".json"), trace_sidecar(t));
    }
}

ExperimentOptions experiment_options(const Globals& g, std::int64_t default_iterations)
{
    ExperimentOptions opts;
    opts.seed = g.seed_or(1);
    opts.seeds = g.seeds_or(kDefaultSeeds);
    opts.iterations = g.iterations_or(default_iterations);
    opts.threads = g.threads ? g.threads : g.config.value("threads", 0U);
    opts.record_points = g.config.value("record_points", opts.record_points);
    opts.window_fraction = g.config.value("window_fraction", opts.window_fraction);
    return opts;
}

json finish_summary(const ExperimentSummary& s)
{
    json j = to_json(s);
    j["timestamp"] = utc_timestamp();
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Set-wise coordinate descent: simulations, experiments and checks"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON file with defaults for any option")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "Output directory");
    app.add_option("--seed", g.seed, "Base seed");
    app.add_option("--iterations", g.iterations, "Iterations per run");
    app.add_option("--seeds", g.seeds, "Number of seeded runs");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "Write a graph JSON file")->fallthrough();
    std::optional<std::string> gen_type;
    std::optional<int> gen_n;
    std::optional<int> gen_degree;
    std::optional<int> gen_extra;
    gen->add_option("--type", gen_type, "circulant or random")->check(CLI::IsMember({"circulant", "random"}));
    gen->add_option("--n", gen_n, "Number of nodes");
    gen->add_option("--degree", gen_degree, "Degree of the circulant graph");
    gen->add_option("--extra-edges", gen_extra, "Chords added to a random spanning tree");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run one algorithm on a problem spec")->fallthrough();
    std::string problem_path;
    std::string graph_file;
    std::string algorithm = "su";
    std::optional<double> eta;
    std::int64_t record_every = 1;
    run_cmd->add_option("--problem", problem_path, "Problem spec JSON")->check(CLI::ExistingFile);
    run_cmd->add_option("--graph-file", graph_file, "Graph JSON replacing the spec's graph")->check(CLI::ExistingFile);
    run_cmd->add_option("--algorithm", algorithm, "su or sgs")->check(CLI::IsMember({"su", "sgs"}));
    run_cmd->add_option("--eta", eta, "Step size (default 1/L)");
    run_cmd->add_option("--record-every", record_every, "Trace row interval");

    // experiments
    auto* dec = app.add_subcommand("experiment-decentralized", "n=24 circulant consensus experiment")->fallthrough();
    std::optional<int> degree;
    std::optional<int> index_base;
    bool keep_traces = false;
    dec->add_option("--degree", degree, "Graph degree (8 or 12 in the reference setup)");
    dec->add_option("--index-base", index_base, "Node index offset of the c pattern");
    dec->add_flag("--traces", keep_traces, "Write per-run CSV traces to --out");

    auto* ps = app.add_subcommand("experiment-paramserver", "Separable quadratic parameter-server experiment")
                   ->fallthrough();
    std::optional<int> n_sets;
    std::optional<int> set_size;
    ps->add_option("--sets", n_sets, "Number of sets");
    ps->add_option("--set-size", set_size, "Coordinates per set");
    ps->add_flag("--traces", keep_traces, "Write per-run CSV traces to --out");

    auto* ver = app.add_subcommand("verify", "Run the norm inequality checks")->fallthrough();
    bool full = false;
    ver->add_flag("--full", full, "Full scale (default: fast)");

    auto* est = app.add_subcommand("estimate-rate", "Fit a linear rate to a trace CSV")->fallthrough();
    std::string trace_path;
    std::optional<double> window;
    std::optional<double> relative_floor;
    est->add_option("--trace", trace_path, "Trace CSV")->required()->check(CLI::ExistingFile);
    est->add_option("--window", window, "Trailing fraction of points to fit");
    est->add_option("--relative-floor", relative_floor,
                    "Cut the curve below this times the initial suboptimality (0 disables)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!g.config_path.empty()) g.config = read_json_file(g.config_path);

        if (*gen) {
            std::mt19937_64 rng(g.seed_or(0));
            const auto type = pick(gen_type, g.config, "type", std::string("circulant"));
            const int n = pick(gen_n, g.config, "n", 24);
            const Graph graph = type == "random"
                                    ? random_connected_graph(n, pick(gen_extra, g.config, "extra_edges", 0), rng)
                                    : circulant_regular(n, pick(gen_degree, g.config, "degree", 8));
            emit(g, "graph.json", to_json(graph));
            return 0;
        }

        if (*run_cmd) {
            json spec;
            if (!problem_path.empty()) {
                spec = read_json_file(problem_path);
            } else if (g.config.contains("problem")) {
                spec = g.config.at("problem");
            } else {
                throw Error(ErrorKind::InvalidConfig, "run needs --problem or a \"problem\" entry in --config");
            }
            if (!graph_file.empty()) spec["graph"] = read_json_file(graph_file);
            if (g.seed && !spec.contains("seed")) spec["seed"] = *g.seed;

            RunConfig cfg;
            cfg.rule = parse_rule(g.config.value("algorithm", algorithm));
            if (run_cmd->count("--algorithm")) cfg.rule = parse_rule(algorithm);
            cfg.iterations = g.iterations_or(1000);
            cfg.seed = g.seed_or(1);
            cfg.eta = eta;
            if (!cfg.eta && g.config.contains("eta")) cfg.eta = g.config.at("eta").get<double>();
            cfg.record_every = run_cmd->count("--record-every") ? record_every
                                                                 : g.config.value("record_every", record_every);

            const auto setup = problem_from_json(spec);
            const Trace trace = std::visit([&](const auto& s) { return run(s.problem, s.initial, cfg); }, setup);
            json summary = trace_sidecar(trace);
            summary["timestamp"] = utc_timestamp();
            if (const auto out = g.out(); !out.empty()) {
                fs::create_directories(out);
                write_traces(out, "", {trace});
            } else {
                write_trace_csv(std::cerr, trace);
            }
            std::cout << summary.dump(2) << '\n';
            return 0;
        }

        if (*dec) {
            auto opts = experiment_options(g, kDecentralizedIterations);
            opts.keep_traces = keep_traces && !g.out().empty();
            const int deg = pick(degree, g.config, "degree", 8);
            if (deg != 8 && deg != 12) std::cerr << "warning: degree " << deg << " differs from the reference setup\n";
            const auto s = experiment_decentralized(deg, opts, pick(index_base, g.config, "index_base", 0));
            emit(g, "summary_decentralized_" + std::to_string(deg) + ".json", finish_summary(s));
            if (opts.keep_traces) {
                write_traces(g.out(), "dec" + std::to_string(deg) + "_", s.uniform.traces);
                write_traces(g.out(), "dec" + std::to_string(deg) + "_", s.gauss_southwell.traces);
            }
            return 0;
        }

        if (*ps) {
            auto opts = experiment_options(g, kParamServerIterations);
            opts.keep_traces = keep_traces && !g.out().empty();
            const int sets = pick(n_sets, g.config, "n_sets", 24);
            const int size = pick(set_size, g.config, "set_size", 4);
            const auto s = experiment_paramserver(sets, size, opts);
            const std::string tag = std::to_string(sets) + "x" + std::to_string(size);
            emit(g, "summary_paramserver_" + tag + ".json", finish_summary(s));
            if (opts.keep_traces) {
                write_traces(g.out(), "ps" + tag + "_", s.uniform.traces);
                write_traces(g.out(), "ps" + tag + "_", s.gauss_southwell.traces);
            }
            return 0;
        }

        if (*ver) {
            const auto level = full ? VerifyLevel::Full : parse_verify_level(g.config.value("level", "fast"));
            const auto report = verify(level, g.seed_or(0));
            emit(g, "verify.json", to_json(report));
            return report.passed() ? 0 : 1;
        }

        if (*est) {
            std::ifstream in(trace_path);
            const auto rows = read_trace_csv(in);
            std::vector<double> iters;
            std::vector<double> values;
            for (const auto& r : rows) {
                iters.push_back(static_cast<double>(r.iter));
                values.push_back(r.suboptimality);
            }
            if (values.empty()) throw Error(ErrorKind::InsufficientPoints, "trace has no rows");
            // initial suboptimality from the sidecar written by `run`, else the first row
            double reference = values.front();
            if (const auto sidecar = fs::path(trace_path).replace_extension(".json"); fs::exists(sidecar)) {
                reference = read_json_file(sidecar).value("initial_suboptimality", reference);
            }
            const double floor = pick(relative_floor, g.config, "relative_floor", kRelativeRoundoffFloor) * reference;
            const auto rate =
                estimate_rate(iters, values, pick(window, g.config, "window_fraction", 1.0 / 3.0), floor);
            emit(g, "rate.json", to_json(rate));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
