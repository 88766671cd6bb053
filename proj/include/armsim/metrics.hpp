#pragma once

#include <cmath>
#include <vector>

#include "armsim/types.hpp"

namespace armsim {

struct NeverRisesError : Error {
    using Error::Error;
};

/// Step-response summary. settling/rise are in seconds; `settled` is false
/// when the response never stays inside the +/-2% band.
struct StepMetrics {
    double overshoot_pct = 0.0;
    double settling_time_s = 0.0;
    bool settled = false;
    double rise_time_s = 0.0;
    double steady_state_error = 0.0;
};

/// Overshoot, +/-2% settling time and 10-90% rise time of a sampled step
/// response. `series[k]` is the value at t = k*dt. A series that starts at
/// (or past) the 90% level gets rise_time 0 by rule; a series that never
/// reaches 10% of the step is an error.
inline StepMetrics compute_step_metrics(const std::vector<double>& series, double target,
                                        double initial, double dt) {
    if (series.empty()) throw Error("compute_step_metrics: empty series");
    if (target == initial) throw Error("compute_step_metrics: target equals initial");

    const double step = target - initial;
    StepMetrics m;

    double peak = 0.0; // normalized progress toward/past the target
    for (double y : series) peak = std::max(peak, (y - initial) / step);
    m.overshoot_pct = std::max(0.0, (peak - 1.0) * 100.0);

    const double band = 0.02 * std::abs(step);
    std::size_t last_outside = 0;
    bool any_outside = false;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (std::abs(series[k] - target) > band) {
            last_outside = k;
            any_outside = true;
        }
    }
    if (!any_outside) {
        m.settling_time_s = 0.0;
        m.settled = true;
    } else if (last_outside + 1 < series.size()) {
        m.settling_time_s = static_cast<double>(last_outside + 1) * dt;
        m.settled = true;
    } else {
        m.settling_time_s = static_cast<double>(series.size() - 1) * dt;
        m.settled = false;
    }

    auto progress = [&](std::size_t k) { return (series[k] - initial) / step; };
    if (progress(0) >= 0.9) {
        m.rise_time_s = 0.0;
    } else {
        std::size_t k10 = series.size(), k90 = series.size();
        for (std::size_t k = 0; k < series.size(); ++k) {
            if (k10 == series.size() && progress(k) >= 0.1) k10 = k;
            if (progress(k) >= 0.9) {
                k90 = k;
                break;
            }
        }
        if (k10 == series.size())
            throw NeverRisesError("response never reaches 10% of the step");
        m.rise_time_s = k90 == series.size()
                            ? static_cast<double>(series.size() - 1 - k10) * dt
                            : static_cast<double>(k90 - k10) * dt;
    }

    m.steady_state_error = std::abs(series.back() - target);
    return m;
}

} // namespace armsim
