#include <setcd/experiment.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <setcd/error.hpp>

namespace setcd {

namespace {

/// Calls body(k) for k in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(int count, unsigned threads, Body&& body)
{
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (int k = next++; k < count; k = next++) {
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

std::int64_t record_every(std::int64_t iterations, int points)
{
    return std::max<std::int64_t>(1, iterations / std::max(points, 1));
}

void fill_bounds(ExperimentSummary& s)
{
    s.bound_su = 2.0 * s.strong_convexity / (s.smoothness * s.n * s.n_max);
    s.bound_sgs = 2.0 * s.strong_convexity / (s.smoothness * s.n);
    s.rho_u = s.uniform.rate.rho;
    s.rho_g = s.gauss_southwell.rate.rho;
    s.ratio = s.rho_g / s.rho_u;
}

} // namespace

template <SetwiseProblem P>
AlgorithmResult run_seeds(const P& p, const typename P::State& initial, Rule rule, std::int64_t iterations,
                          const ExperimentOptions& opts)
{
    if (opts.seeds <= 0) throw Error(ErrorKind::InvalidConfig, "seeds must be positive");
    RunConfig cfg;
    cfg.rule = rule;
    cfg.iterations = iterations;
    cfg.record_every = record_every(iterations, opts.record_points);

    std::vector<Trace> traces(opts.seeds);
    parallel_for(opts.seeds, opts.threads, [&](int k) {
        RunConfig local = cfg;
        local.seed = opts.seed + 1 + static_cast<std::uint64_t>(k);
        traces[k] = run(p, initial, local);
    });

    AlgorithmResult out;
    out.rule = rule;
    const std::size_t rows = traces.front().rows.size();
    bool hit_floor = false;
    for (std::size_t r = 0; r <= rows && !hit_floor; ++r) {
        double sum = 0.0;
        for (const auto& t : traces) {
            const double v = r == 0 ? t.initial_suboptimality : t.rows[r - 1].suboptimality;
            const double floor = std::max(kSuboptimalityFloor, opts.relative_floor * t.initial_suboptimality);
            if (!(v > floor)) {
                hit_floor = true;
                break;
            }
            sum += std::log(v);
        }
        if (hit_floor) break;
        out.iters.push_back(r == 0 ? 0.0 : static_cast<double>(traces.front().rows[r - 1].iter));
        out.mean_log_suboptimality.push_back(sum / static_cast<double>(traces.size()));
    }
    if (out.iters.empty()) {
        throw Error(ErrorKind::NonPositiveSuboptimality, "initial state is already optimal");
    }
    out.rate = estimate_rate_log(out.iters, out.mean_log_suboptimality, hit_floor, opts.window_fraction);
    for (const auto& t : traces) out.messages += t.messages;
    if (opts.keep_traces) out.traces = std::move(traces);
    return out;
}

template AlgorithmResult run_seeds(const DualConsensusProblem&, const DualState&, Rule, std::int64_t,
                                   const ExperimentOptions&);
template AlgorithmResult run_seeds(const SeparableQuadraticProblem&, const SeparableState&, Rule, std::int64_t,
                                   const ExperimentOptions&);

DualConsensusProblem decentralized_problem(int degree, int dim, int n, int index_base)
{
    Graph g = circulant_regular(n, degree);
    std::vector<Quadratic> functions;
    functions.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double c = (i + index_base) % degree == 0 ? 50.0 : 1.0;
        functions.push_back(Quadratic::scaled_identity(dim, c));
    }
    return DualConsensusProblem(std::move(g), std::move(functions));
}

ExperimentSummary experiment_decentralized(int degree, const ExperimentOptions& opts, int index_base)
{
    const auto p = decentralized_problem(degree, 5, 24, index_base);
    const auto initial = p.gaussian_state(opts.seed);
    const std::int64_t iterations = opts.iterations > 0 ? opts.iterations : kDecentralizedIterations;

    ExperimentSummary s;
    s.setting = "decentralized";
    s.n = p.num_nodes();
    s.n_max = p.sets().max_degree;
    s.coordinates = p.num_coordinates();
    s.block_dim = p.block_dim();
    s.smoothness = p.smoothness();
    s.strong_convexity = p.sigma_a();
    s.seeds = opts.seeds;
    s.iterations = iterations;
    s.seed = opts.seed;
    s.uniform = run_seeds(p, initial, Rule::Uniform, iterations, opts);
    s.gauss_southwell = run_seeds(p, initial, Rule::GaussSouthwell, iterations, opts);
    fill_bounds(s);
    return s;
}

ExperimentSummary experiment_paramserver(int n_sets, int set_size, const ExperimentOptions& opts)
{
    if (n_sets <= 0 || set_size <= 0 || (static_cast<long>(n_sets) * set_size) % 2 != 0) {
        throw Error(ErrorKind::InconsistentSetSpec,
                    std::to_string(n_sets) + " sets of " + std::to_string(set_size) +
                        " coordinates cannot place every coordinate in exactly two sets");
    }
    const Graph carrier = circulant_regular(n_sets, set_size);
    const auto p = separable_problem(carrier, 10.0, 3.0, opts.seed);
    const auto initial = far_near_state(p, perfect_matching_circulant(carrier));
    const std::int64_t iterations = opts.iterations > 0 ? opts.iterations : kParamServerIterations;

    ExperimentSummary s;
    s.setting = "paramserver";
    s.n = n_sets;
    s.n_max = p.sets().max_degree;
    s.coordinates = p.num_coordinates();
    s.smoothness = p.smoothness();
    s.strong_convexity = p.strong_convexity();
    s.seeds = opts.seeds;
    s.iterations = iterations;
    s.seed = opts.seed;
    s.uniform = run_seeds(p, initial, Rule::Uniform, iterations, opts);
    s.gauss_southwell = run_seeds(p, initial, Rule::GaussSouthwell, iterations, opts);
    fill_bounds(s);
    return s;
}

nlohmann::json to_json(const RateEstimate& r)
{
    return {{"rho", r.rho},
            {"slope", std::isfinite(r.slope) ? nlohmann::json(r.slope) : nlohmann::json(nullptr)},
            {"window", {r.window_start, r.window_end}},
            {"residual", r.residual},
            {"dynamic_range", r.dynamic_range},
            {"n_points", r.n_points},
            {"hit_floor", r.hit_floor},
            {"linear", r.is_linear()}};
}

nlohmann::json to_json(const ExperimentSummary& s)
{
    return {{"setting", s.setting},
            {"n", s.n},
            {"N_max", s.n_max},
            {"rho_U", s.rho_u},
            {"rho_G", s.rho_g},
            {"ratio", s.ratio},
            {"bound_su", s.bound_su},
            {"bound_sgs", s.bound_sgs},
            {"seeds", s.seeds},
            {"iterations", s.iterations},
            {"seed", s.seed},
            {"coordinates", s.coordinates},
            {"block_dim", s.block_dim},
            {"L", s.smoothness},
            {"sigma", s.strong_convexity},
            {"fit_U", to_json(s.uniform.rate)},
            {"fit_G", to_json(s.gauss_southwell.rate)},
            {"messages_U", s.uniform.messages},
            {"messages_G", s.gauss_southwell.messages}};
}

} // namespace setcd
