#pragma once

#include <cmath>

#include "armsim/arm_model.hpp"
#include "armsim/dynamics.hpp"
#include "armsim/types.hpp"

namespace armsim {

enum class ControlMode { open_loop, pid, hybrid };

struct PidGains {
    Vector6d kp = Vector6d::Zero();
    Vector6d ki = Vector6d::Zero();
    Vector6d kd = Vector6d::Zero();
    Vector6d output_limit = Vector6d::Constant(5.0);   // N*m
    Vector6d integral_limit = Vector6d::Constant(10.0); // accumulator clamp (rad*s)
};

struct ControllerState {
    Vector6d integral = Vector6d::Zero();
    Vector6d prev_error = Vector6d::Zero();
    ControlMode mode = ControlMode::pid;
};

struct ControlOutput {
    Vector6d u = Vector6d::Zero();
    ControllerState state;
};

/// Discrete PID: rectangular-rule integral with accumulator clamping,
/// derivative on error (difference quotient), output saturated.
inline ControlOutput pid_update(const PidGains& gains, const ControllerState& state,
                                const Vector6d& error, double dt) {
    if (!(dt > 0.0)) throw Error("pid_update: dt must be > 0");
    ControlOutput out;
    out.state = state;
    for (int i = 0; i < 6; ++i) {
        double acc = state.integral[i] + error[i] * dt;
        acc = std::clamp(acc, -gains.integral_limit[i], gains.integral_limit[i]);
        const double deriv = (error[i] - state.prev_error[i]) / dt;
        double u = gains.kp[i] * error[i] + gains.ki[i] * acc + gains.kd[i] * deriv;
        u = std::clamp(u, -gains.output_limit[i], gains.output_limit[i]);
        out.u[i] = u;
        out.state.integral[i] = acc;
        out.state.prev_error[i] = error[i];
    }
    return out;
}

/// Inverse-dynamics feedforward from the nominal model; no feedback at all.
inline Vector6d open_loop_command(const ArmModel& nominal, const Vector6d& q_des,
                                  const Vector6d& qdot_des, const Vector6d& qddot_des) {
    const Vector6d tau_g = gravity_torque(nominal, q_des);
    Vector6d u;
    for (int i = 0; i < 6; ++i)
        u[i] = nominal.joints[i].inertia * qddot_des[i] +
               nominal.joints[i].friction * qdot_des[i] + tau_g[i];
    return u;
}

/// PID plus gravity feedforward evaluated at the desired pose; the sum is
/// re-saturated to the output limit. With zero gravity this reduces to
/// pid_update exactly.
inline ControlOutput hybrid_update(const PidGains& gains, const ControllerState& state,
                                   const Vector6d& error, double dt, const ArmModel& nominal,
                                   const Vector6d& q_des) {
    ControlOutput out = pid_update(gains, state, error, dt);
    const Vector6d tau_g = gravity_torque(nominal, q_des);
    for (int i = 0; i < 6; ++i)
        out.u[i] = std::clamp(out.u[i] + tau_g[i], -gains.output_limit[i],
                              gains.output_limit[i]);
    return out;
}

} // namespace armsim
