#pragma once

#include <cmath>

#include "armsim/types.hpp"

namespace armsim {

struct DegenerateCalibrationError : Error {
    using Error::Error;
};

struct PwmOutOfRangeError : Error {
    using Error::Error;
};

/// Linear angle-to-pulse-width map PWM = m*theta + c, valid between the two
/// calibration angles.
struct PwmCalibration {
    double m = 0.0;         // us per rad
    double c = 0.0;         // us
    double min_angle = 0.0; // rad
    double max_angle = 0.0; // rad
};

struct CalibrationPoint {
    double angle = 0.0; // rad
    double pwm = 0.0;   // us
};

inline PwmCalibration calibrate_pwm(const CalibrationPoint& a, const CalibrationPoint& b) {
    if (a.angle == b.angle)
        throw DegenerateCalibrationError("calibration points share the same angle");
    PwmCalibration cal;
    cal.m = (b.pwm - a.pwm) / (b.angle - a.angle);
    cal.c = a.pwm - cal.m * a.angle;
    cal.min_angle = std::min(a.angle, b.angle);
    cal.max_angle = std::max(a.angle, b.angle);
    return cal;
}

/// Hobby-servo pulse width for an angle, rounded to whole microseconds.
inline long angle_to_pwm(const PwmCalibration& cal, double theta) {
    if (theta < cal.min_angle || theta > cal.max_angle)
        throw PwmOutOfRangeError("angle outside calibrated range");
    return std::lround(cal.m * theta + cal.c);
}

/// The reference calibration used in docs and the CSV examples:
/// 0 rad -> 500 us, pi rad -> 2500 us.
inline PwmCalibration default_pwm_calibration() {
    return calibrate_pwm({0.0, 500.0}, {kPi, 2500.0});
}

/// Pure-heating thermal integrator T(t) = T0 + integral P/C dt. No cooling
/// term; temperature is monotone non-decreasing.
struct ThermalState {
    double temp = 25.0;          // deg C
    double energy = 0.0;         // accumulated heat, J
    double heat_capacity = 5.0;  // J/K
    double initial_temp = 25.0;  // deg C
    double shutdown_temp = 80.0; // deg C
};

/// Accumulates energy and derives temp = T0 + E/C, so constant-power runs
/// are independent of how the interval is partitioned whenever power*dt is
/// representable.
inline ThermalState thermal_step(const ThermalState& state, double power_w, double dt) {
    if (power_w < 0.0) throw Error("thermal_step: power must be >= 0");
    if (!(dt > 0.0)) throw Error("thermal_step: dt must be > 0");
    ThermalState next = state;
    next.energy = state.energy + power_w * dt;
    next.temp = state.initial_temp + next.energy / state.heat_capacity;
    return next;
}

inline bool overheated(const ThermalState& state) {
    return state.temp >= state.shutdown_temp;
}

} // namespace armsim
