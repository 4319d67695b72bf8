#include <setcd/rate.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <setcd/error.hpp>

namespace setcd {

RateEstimate estimate_rate_log(std::span<const double> iters, std::span<const double> log_suboptimality,
                               bool hit_floor, double window_fraction)
{
    if (iters.size() != log_suboptimality.size()) {
        throw Error(ErrorKind::DimensionMismatch, "iteration and value counts differ");
    }
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "window fraction must lie in (0, 1]");
    }
    const auto total = static_cast<int>(iters.size());
    RateEstimate r;
    r.hit_floor = hit_floor;

    int count = static_cast<int>(std::ceil(window_fraction * total));
    if (count < kMinRatePoints) {
        if (!hit_floor) {
            throw Error(ErrorKind::InsufficientPoints,
                        std::to_string(count) + " points in window, need " + std::to_string(kMinRatePoints));
        }
        count = std::min(kMinRatePoints, total);
    }
    if (hit_floor && count < 2) {
        r.rho = 1.0;
        r.slope = -std::numeric_limits<double>::infinity();
        r.n_points = count;
        if (total > 0) r.window_start = r.window_end = iters[total - 1];
        return r;
    }

    const int first = total - count;
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (int k = first; k < total; ++k) {
        mean_x += iters[k];
        mean_y += log_suboptimality[k];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int k = first; k < total; ++k) {
        sxx += (iters[k] - mean_x) * (iters[k] - mean_x);
        sxy += (iters[k] - mean_x) * (log_suboptimality[k] - mean_y);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss_res = 0.0;
    double lo = log_suboptimality[first];
    double hi = lo;
    for (int k = first; k < total; ++k) {
        const double fit = mean_y + slope * (iters[k] - mean_x);
        ss_res += (log_suboptimality[k] - fit) * (log_suboptimality[k] - fit);
        lo = std::min(lo, log_suboptimality[k]);
        hi = std::max(hi, log_suboptimality[k]);
    }
    r.slope = slope;
    r.rho = -std::expm1(slope);
    r.window_start = iters[first];
    r.window_end = iters[total - 1];
    r.residual = std::sqrt(ss_res / count);
    r.dynamic_range = hi - lo;
    r.n_points = count;
    return r;
}

RateEstimate estimate_rate(std::span<const double> iters, std::span<const double> suboptimality,
                           double window_fraction, double floor)
{
    if (iters.size() != suboptimality.size()) {
        throw Error(ErrorKind::DimensionMismatch, "iteration and value counts differ");
    }
    if (suboptimality.empty()) throw Error(ErrorKind::InsufficientPoints, "empty trace");
    if (!(suboptimality.front() > kSuboptimalityFloor)) {
        throw Error(ErrorKind::NonPositiveSuboptimality, "first value " + std::to_string(suboptimality.front()));
    }
    std::vector<double> logs;
    logs.reserve(suboptimality.size());
    bool hit_floor = false;
    const double cut = std::max(floor, kSuboptimalityFloor);
    for (double v : suboptimality) {
        if (!(v > cut)) {
            hit_floor = true;
            break;
        }
        logs.push_back(std::log(v));
    }
    return estimate_rate_log(iters.first(logs.size()), logs, hit_floor, window_fraction);
}

RateEstimate estimate_rate(const Trace& trace, double window_fraction)
{
    std::vector<double> iters{0.0};
    std::vector<double> values{trace.initial_suboptimality};
    for (const auto& row : trace.rows) {
        iters.push_back(static_cast<double>(row.iter));
        values.push_back(row.suboptimality);
    }
    return estimate_rate(iters, values, window_fraction);
}

} // namespace setcd
