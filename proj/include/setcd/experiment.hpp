#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <setcd/dual.hpp>
#include <setcd/engine.hpp>
#include <setcd/rate.hpp>

namespace setcd {

inline constexpr std::int64_t kDecentralizedIterations = 200000;
inline constexpr std::int64_t kParamServerIterations = 50000;
inline constexpr int kDefaultSeeds = 20;
/// Suboptimality is quadratic in the error of lambda, so double precision
/// bottoms out near (1e3 eps)^2 relative to the starting gap.
inline constexpr double kRelativeRoundoffFloor = 1e-25;

struct ExperimentOptions
{
    int seeds = kDefaultSeeds;
    /// 0 picks the per-experiment default.
    std::int64_t iterations = 0;
    /// Problem seed; run k uses seed + 1 + k.
    std::uint64_t seed = 1;
    /// Approximate number of recorded rows per run.
    int record_points = 2000;
    double window_fraction = 1.0 / 3.0;
    /// Per-seed floor is this times the seed's initial suboptimality.
    double relative_floor = kRelativeRoundoffFloor;
    /// 0: std::thread::hardware_concurrency().
    unsigned threads = 0;
    bool keep_traces = false;
};

/// Seed-averaged curve of one algorithm: mean of log-suboptimality per row.
struct AlgorithmResult
{
    Rule rule = Rule::Uniform;
    std::vector<double> iters;
    std::vector<double> mean_log_suboptimality;
    RateEstimate rate;
    std::int64_t messages = 0;
    std::vector<Trace> traces;
};

struct ExperimentSummary
{
    std::string setting;
    int n = 0;
    int n_max = 0;
    int coordinates = 0;
    int block_dim = 1;
    double rho_u = 0.0;
    double rho_g = 0.0;
    double ratio = 0.0;
    /// 2 sigma / (L n N_max) and 2 sigma / (L n).
    double bound_su = 0.0;
    double bound_sgs = 0.0;
    double smoothness = 0.0;
    double strong_convexity = 0.0;
    int seeds = 0;
    std::int64_t iterations = 0;
    std::uint64_t seed = 0;
    AlgorithmResult uniform;
    AlgorithmResult gauss_southwell;
};

/// Runs `cfg.rule` from `initial` once per seed and averages in log space.
/// Rows at or past the first seed-wise floor hit are dropped from the average;
/// a seed's floor is max(kSuboptimalityFloor, relative_floor * its initial gap).
template <SetwiseProblem P>
AlgorithmResult run_seeds(const P& p, const typename P::State& initial, Rule rule, std::int64_t iterations,
                          const ExperimentOptions& opts);

/// n = 24 circulant graph of the given degree; node i gets c = 50 when
/// (i + index_base) mod degree == 0 and c = 1 otherwise, f_i = c ||theta||^2
/// in dimension 5. Starts from Gaussian lambda drawn with opts.seed.
ExperimentSummary experiment_decentralized(int degree, const ExperimentOptions& opts = {}, int index_base = 0);

/// Separable x^T D x over the edges of circulant(n_sets, set_size) with
/// D ~ N(10, 3); one far coordinate per set starts at 100, the rest at 1.
ExperimentSummary experiment_paramserver(int n_sets, int set_size, const ExperimentOptions& opts = {});

/// Problem of experiment_decentralized, exposed for direct runs.
DualConsensusProblem decentralized_problem(int degree, int dim = 5, int n = 24, int index_base = 0);

/// Summary fields {"setting","n","N_max","rho_U","rho_G","ratio","bound_su",
/// "bound_sgs","seeds","iterations"} plus fit diagnostics.
nlohmann::json to_json(const ExperimentSummary& s);
nlohmann::json to_json(const RateEstimate& r);

} // namespace setcd
