#pragma once

#include <cstdint>
#include <span>

#include <setcd/engine.hpp>

namespace setcd {

/// Values at or below this end the usable part of a curve.
inline constexpr double kSuboptimalityFloor = 1e-300;

/// Fit of log(suboptimality) = a + m * iter over a trailing window;
/// rho = 1 - exp(m) is the per-iteration reduction.
struct RateEstimate
{
    double rho = 0.0;
    double slope = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
    /// RMS of the log-space fit residuals.
    double residual = 0.0;
    /// max - min of log(suboptimality) inside the window.
    double dynamic_range = 0.0;
    int n_points = 0;
    /// The curve reached kSuboptimalityFloor and was truncated there.
    bool hit_floor = false;

    /// Linear decay: residual at most `fraction` of the window's dynamic range.
    bool is_linear(double fraction = 0.05) const { return residual <= fraction * dynamic_range; }
};

inline constexpr int kMinRatePoints = 10;

/// Least-squares rate over the trailing `window_fraction` of the points.
///
/// The curve is cut at the first value <= max(floor, kSuboptimalityFloor) and the cut
/// is flagged. A cut curve with a short window is fitted on its last
/// kMinRatePoints usable points (or fewer); with a single usable point it
/// yields rho = 1, total reduction. An uncut curve with fewer than
/// kMinRatePoints window points throws InsufficientPoints, and a first value
/// at or below the floor throws NonPositiveSuboptimality.
RateEstimate estimate_rate(std::span<const double> iters, std::span<const double> suboptimality,
                           double window_fraction = 1.0 / 3.0, double floor = kSuboptimalityFloor);

/// Same fit on log-suboptimality values that are already cut at the floor;
/// `hit_floor` says whether a cut happened.
RateEstimate estimate_rate_log(std::span<const double> iters, std::span<const double> log_suboptimality,
                               bool hit_floor, double window_fraction = 1.0 / 3.0);

/// Uses the initial point (iter 0) followed by every recorded row.
RateEstimate estimate_rate(const Trace& trace, double window_fraction = 1.0 / 3.0);

} // namespace setcd
