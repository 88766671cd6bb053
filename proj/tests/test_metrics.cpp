#include <doctest.h>

#include <cmath>
#include <vector>

#include "armsim/metrics.hpp"

using namespace armsim;

namespace {

/// Unit step response of a second-order system with damping ratio zeta and
/// natural frequency wn, sampled at dt.
std::vector<double> second_order_step(double zeta, double wn, double dt, double t_end) {
    std::vector<double> y;
    const double wd = wn * std::sqrt(1.0 - zeta * zeta);
    const double k = zeta / std::sqrt(1.0 - zeta * zeta);
    for (double t = 0.0; t <= t_end + 0.5 * dt; t += dt)
        y.push_back(1.0 - std::exp(-zeta * wn * t) * (std::cos(wd * t) + k * std::sin(wd * t)));
    return y;
}

} // namespace

TEST_CASE("zeta = 0.7 second-order overshoot matches the closed form") {
    // 100*exp(-pi*zeta/sqrt(1-zeta^2)) = 4.5988...% for zeta = 0.7.
    const double expect = 100.0 * std::exp(-kPi * 0.7 / std::sqrt(1.0 - 0.49));
    const auto y = second_order_step(0.7, 5.0, 0.001, 10.0);
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.001);
    CHECK(m.overshoot_pct == doctest::Approx(expect).epsilon(0).scale(1).epsilon(0.1));
    CHECK(m.settled);
}

TEST_CASE("monotone first-order response has zero overshoot") {
    std::vector<double> y;
    for (double t = 0.0; t <= 8.0; t += 0.001) y.push_back(1.0 - std::exp(-t));
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.001);
    CHECK(m.overshoot_pct == 0.0);
    // first-order: settling to 2% at t = -ln(0.02) = 3.912 s
    CHECK(m.settling_time_s == doctest::Approx(3.912).epsilon(0.01));
    // 10-90% rise: ln(0.9/0.1) = 2.197 s
    CHECK(m.rise_time_s == doctest::Approx(2.197).epsilon(0.01));
}

TEST_CASE("series constant at the target: settling 0 and rise 0 by rule") {
    const std::vector<double> y(100, 1.0);
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.01);
    CHECK(m.settling_time_s == 0.0);
    CHECK(m.settled);
    CHECK(m.rise_time_s == 0.0);
    CHECK(m.overshoot_pct == 0.0);
    CHECK(m.steady_state_error == 0.0);
}

TEST_CASE("a response that never reaches 10% of the step is an error") {
    const std::vector<double> y(50, 0.01);
    CHECK_THROWS_AS(compute_step_metrics(y, 1.0, 0.0, 0.01), NeverRisesError);
}

TEST_CASE("a response that never stays in the band is flagged unsettled") {
    std::vector<double> y;
    for (double t = 0.0; t <= 5.0; t += 0.01)
        y.push_back(1.0 + 0.5 * std::sin(3.0 * t)); // sustained oscillation
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.01);
    CHECK_FALSE(m.settled);
    CHECK(m.settling_time_s == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("settling time is the last exit from the +/-2% band") {
    // Inside the band from the start, briefly out at t = 1.0, back in after.
    std::vector<double> y(300, 1.0);
    y[100] = 1.05;
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.01);
    CHECK(m.settled);
    CHECK(m.settling_time_s == doctest::Approx(1.01).epsilon(1e-9));
}

TEST_CASE("overshoot is measured on normalized progress for negative steps") {
    // Step from 0.5 down to -0.5 with a 10% undershoot past the target.
    std::vector<double> y;
    for (double t = 0.0; t <= 6.0; t += 0.01) {
        const double s = 1.0 - std::exp(-2.0 * t) * (1.0 + 2.0 * t);
        y.push_back(0.5 - 1.0 * s);
    }
    y[300] = -0.6; // excursion past the target
    const StepMetrics m = compute_step_metrics(y, -0.5, 0.5, 0.01);
    CHECK(m.overshoot_pct == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(compute_step_metrics({}, 1.0, 0.0, 0.01), Error);
    CHECK_THROWS_AS(compute_step_metrics({0.0}, 1.0, 1.0, 0.01), Error);
}

TEST_CASE("steady-state error is the final distance to the target") {
    std::vector<double> y;
    for (double t = 0.0; t <= 5.0; t += 0.01) y.push_back(0.97 * (1.0 - std::exp(-3.0 * t)));
    const StepMetrics m = compute_step_metrics(y, 1.0, 0.0, 0.01);
    CHECK(m.steady_state_error == doctest::Approx(0.03).epsilon(1e-3));
}
