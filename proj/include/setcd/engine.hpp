#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <setcd/error.hpp>
#include <setcd/graph.hpp>
#include <setcd/objective.hpp>

namespace setcd {

/// A problem whose coordinates are grouped into overlapping sets, one per
/// activatable node.
template <class P>
concept SetwiseProblem = requires(const P& p, typename P::State& s, const typename P::State& cs, int index,
                                  double eta) {
    { p.sets() } -> std::convertible_to<const SetSystem&>;
    { p.num_nodes() } -> std::convertible_to<int>;
    { p.block_dim() } -> std::convertible_to<int>;
    { p.smoothness() } -> std::convertible_to<double>;
    { p.coordinate_gradient(cs, index) } -> std::convertible_to<Vector>;
    { p.apply_update(s, index, eta) } -> std::convertible_to<double>;
    { p.suboptimality(cs) } -> std::convertible_to<double>;
};

enum class Rule { Uniform, GaussSouthwell };

std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view name);

using Rng = std::mt19937_64;

struct RunConfig
{
    Rule rule = Rule::Uniform;
    std::int64_t iterations = 0;
    std::uint64_t seed = 0;
    /// Unset: eta = 1/L.
    std::optional<double> eta;
    std::int64_t record_every = 1;
    std::int64_t drift_check_every = 10000;
    /// Enforce F(k+1) <= F(k) - |g|^2/(2L) + 1e-10; skipped when eta > 1/L.
    bool check_descent = true;
};

struct TraceRow
{
    std::int64_t iter;
    int node;
    int edge;
    double grad_sq;
    double suboptimality;
};

struct Trace
{
    Rule rule = Rule::Uniform;
    std::uint64_t seed = 0;
    double eta = 0.0;
    double initial_suboptimality = 0.0;
    std::vector<TraceRow> rows;
    /// Gradient payloads exchanged: 2 per SU step, N_i + 1 per SGS step.
    std::int64_t messages = 0;
    std::int64_t resyncs = 0;
};

inline constexpr double kDescentSlack = 1e-10;
inline constexpr double kDriftTolerance = 1e-8;

/// Uniform pick from S_i.
int select_uniform(Rng& rng, const SetSystem& sets, int node);

template <SetwiseProblem P>
int select_gs(const P& p, const typename P::State& s, int node)
{
    const auto& set = p.sets().sets.at(node);
    if (set.empty()) throw Error(ErrorKind::IsolatedNode, "node " + std::to_string(node));
    // S_i is sorted, so strict > keeps the lowest index on ties.
    int best = set.front();
    double best_sq = -1.0;
    for (int m : set) {
        const double sq = p.coordinate_gradient(s, m).squaredNorm();
        if (sq > best_sq) {
            best_sq = sq;
            best = m;
        }
    }
    return best;
}

namespace detail {

struct StepResult
{
    int node;
    int edge;
    double grad_sq;
    double delta_value;
};

template <SetwiseProblem P>
StepResult step_no_record(const P& p, typename P::State& s, int node, Rule rule, double eta, Rng& rng)
{
    const int edge = rule == Rule::Uniform ? select_uniform(rng, p.sets(), node) : select_gs(p, s, node);
    const double grad_sq = p.coordinate_gradient(s, edge).squaredNorm();
    const double delta = p.apply_update(s, edge, eta);
    return {node, edge, grad_sq, delta};
}

inline void check_descent(const StepResult& r, double smoothness, std::int64_t iter)
{
    const double required = -r.grad_sq / (2.0 * smoothness) + kDescentSlack;
    if (r.delta_value > required) {
        throw Error(ErrorKind::DescentViolated, "iteration " + std::to_string(iter) + ": change " +
                                                    std::to_string(r.delta_value) + " > " +
                                                    std::to_string(required));
    }
}

template <class P>
void maybe_resync(const P& p, typename P::State& s, Trace& trace)
{
    if constexpr (requires { p.aggregate_drift(s); p.recompute_aggregates(s); }) {
        if (p.aggregate_drift(s) > kDriftTolerance) {
            p.recompute_aggregates(s);
            ++trace.resyncs;
        }
    }
}

} // namespace detail

/// One activation of `node`: select a coordinate by `rule`, update it, and
/// report the resulting suboptimality.
template <SetwiseProblem P>
TraceRow step(const P& p, typename P::State& s, int node, Rule rule, double eta, Rng& rng)
{
    const auto r = detail::step_no_record(p, s, node, rule, eta, rng);
    return {0, r.node, r.edge, r.grad_sq, p.suboptimality(s)};
}

/// Simulates `cfg.iterations` uniform activations from `initial`. Rows are
/// kept every `record_every` steps and at the final step. The result depends
/// only on (problem, initial, cfg).
template <SetwiseProblem P>
Trace run(const P& p, typename P::State state, const RunConfig& cfg)
{
    if (cfg.iterations <= 0) throw Error(ErrorKind::InvalidConfig, "iterations must be positive");
    if (cfg.record_every <= 0) throw Error(ErrorKind::InvalidConfig, "record_every must be positive");
    if (cfg.eta && !(*cfg.eta > 0.0)) throw Error(ErrorKind::NonPositiveStep, "explicit eta must be positive");

    const double smoothness = p.smoothness();
    const double eta = cfg.eta.value_or(1.0 / smoothness);
    const bool descent = cfg.check_descent && eta <= 1.0 / smoothness;

    Trace trace;
    trace.rule = cfg.rule;
    trace.seed = cfg.seed;
    trace.eta = eta;
    trace.initial_suboptimality = p.suboptimality(state);
    trace.rows.reserve(static_cast<std::size_t>(cfg.iterations / cfg.record_every + 1));

    Rng rng(cfg.seed);
    std::uniform_int_distribution<int> activate(0, p.num_nodes() - 1);
    const auto& degrees = p.sets().degrees;

    for (std::int64_t k = 1; k <= cfg.iterations; ++k) {
        const int node = activate(rng);
        const auto r = detail::step_no_record(p, state, node, cfg.rule, eta, rng);
        if (descent) detail::check_descent(r, smoothness, k);
        trace.messages += cfg.rule == Rule::Uniform ? 2 : degrees[node] + 1;
        if (cfg.drift_check_every > 0 && k % cfg.drift_check_every == 0) detail::maybe_resync(p, state, trace);
        if (k % cfg.record_every == 0 || k == cfg.iterations) {
            trace.rows.push_back({k, r.node, r.edge, r.grad_sq, p.suboptimality(state)});
        }
    }
    return trace;
}

struct ProgressBound
{
    double su;
    double sgs;
};

/// Expected one-step guaranteed decrease under each rule:
/// su = 1/(2Ln) sum_i 1/N_i sum_{l in S_i} |g_l|^2,
/// sgs = 1/(2Ln) sum_i max_{l in S_i} |g_l|^2.
template <SetwiseProblem P>
ProgressBound expected_progress_bound(const P& p, const typename P::State& s)
{
    const auto& sets = p.sets();
    double su = 0.0;
    double sgs = 0.0;
    for (int i = 0; i < sets.num_sets(); ++i) {
        double sum = 0.0;
        double best = 0.0;
        for (int l : sets.sets[i]) {
            const double sq = p.coordinate_gradient(s, l).squaredNorm();
            sum += sq;
            best = std::max(best, sq);
        }
        if (!sets.sets[i].empty()) su += sum / static_cast<double>(sets.sets[i].size());
        sgs += best;
    }
    const double scale = 1.0 / (2.0 * p.smoothness() * p.num_nodes());
    return {su * scale, sgs * scale};
}

} // namespace setcd
