#pragma once

#include <cmath>

#include "armsim/arm_model.hpp"
#include "armsim/kinematics.hpp"
#include "armsim/types.hpp"

namespace armsim {

struct NonFiniteStateError : Error {
    using Error::Error;
};

/// Link COM expressed in the link's own frame. com_offset is measured from
/// the joint axis along the link's a-axis, so in frame-k coordinates the COM
/// sits at (com_offset - a, 0, 0).
inline Eigen::Vector3d link_com_local(const DhRow& row, const JointSpec& joint) {
    return {joint.com_offset - row.a, 0.0, 0.0};
}

/// Signed potential sum U = sum_k m_k g.p_com,k + m_payload g.p_ee.
/// The gravity torque below is -dU/dq; test oracle differentiates this.
inline double potential_sum(const ArmModel& arm, const Vector6d& q) {
    const auto frames = link_frames(arm, q);
    double u = 0.0;
    for (int k = 0; k < 6; ++k) {
        const Eigen::Vector3d local = link_com_local(arm.rows[k], arm.joints[k]);
        const Eigen::Vector3d com = frames[k + 1].block<3, 3>(0, 0) * local +
                                    frames[k + 1].block<3, 1>(0, 3);
        u += arm.joints[k].link_mass * arm.gravity.dot(com);
    }
    u += arm.payload_mass * arm.gravity.dot(frames[6].block<3, 1>(0, 3));
    return u;
}

/// Gravity torque tau_g = -dU/dq, computed analytically as the sum of
/// point-mass Jacobian transposes (link COMs plus end-effector payload).
inline Vector6d gravity_torque(const ArmModel& arm, const Vector6d& q) {
    const auto frames = link_frames(arm, q);
    Vector6d tau_g = Vector6d::Zero();
    for (int k = 0; k < 6; ++k) {
        const double m = arm.joints[k].link_mass;
        if (m == 0.0) continue;
        const Eigen::Vector3d local = link_com_local(arm.rows[k], arm.joints[k]);
        const Eigen::Vector3d com = frames[k + 1].block<3, 3>(0, 0) * local +
                                    frames[k + 1].block<3, 1>(0, 3);
        // The COM of link k moves with joints 1..k+1 == indices 0..k.
        for (int i = 0; i <= k; ++i) {
            const Eigen::Vector3d z = frames[i].block<3, 1>(0, 2);
            const Eigen::Vector3d p = frames[i].block<3, 1>(0, 3);
            tau_g[i] -= m * arm.gravity.dot(z.cross(com - p));
        }
    }
    if (arm.payload_mass != 0.0) {
        const Eigen::Vector3d p_ee = frames[6].block<3, 1>(0, 3);
        for (int i = 0; i < 6; ++i) {
            const Eigen::Vector3d z = frames[i].block<3, 1>(0, 2);
            const Eigen::Vector3d p = frames[i].block<3, 1>(0, 3);
            tau_g[i] -= arm.payload_mass * arm.gravity.dot(z.cross(p_ee - p));
        }
    }
    return tau_g;
}

/// Decoupled per-joint dynamics: thetadd = (tau - b*thetad - tau_g) / I.
inline Vector6d joint_acceleration(const ArmModel& arm, const Vector6d& q,
                                   const Vector6d& qdot, const Vector6d& tau_applied) {
    const Vector6d tau_g = gravity_torque(arm, q);
    Vector6d qddot;
    for (int i = 0; i < 6; ++i)
        qddot[i] = (tau_applied[i] - arm.joints[i].friction * qdot[i] - tau_g[i]) /
                   arm.joints[i].inertia;
    return qddot;
}

/// One semi-implicit Euler step. Commanded torque is saturated to the joint
/// torque limit first; joints hitting a limit are clamped with velocity
/// zeroed. Temperatures are carried through unchanged (thermal model is a
/// separate step).
inline JointState integrate_step(const ArmModel& arm, const JointState& state,
                                 const Vector6d& tau_cmd, double dt) {
    if (!(dt > 0.0 && dt <= 0.01))
        throw Error("integrate_step: dt must lie in (0, 0.01] s");
    JointState next = state;
    for (int i = 0; i < 6; ++i)
        next.tau[i] = std::clamp(tau_cmd[i], -arm.joints[i].max_torque,
                                 arm.joints[i].max_torque);
    next.qddot = joint_acceleration(arm, state.q, state.qdot, next.tau);
    next.qdot = state.qdot + next.qddot * dt;
    next.q = state.q + next.qdot * dt;
    for (int i = 0; i < 6; ++i) {
        if (next.q[i] <= arm.joints[i].limit_min) {
            next.q[i] = arm.joints[i].limit_min;
            next.qdot[i] = 0.0;
        } else if (next.q[i] >= arm.joints[i].limit_max) {
            next.q[i] = arm.joints[i].limit_max;
            next.qdot[i] = 0.0;
        }
    }
    if (!next.q.allFinite() || !next.qdot.allFinite() || !next.qddot.allFinite())
        throw NonFiniteStateError("integrator produced a non-finite state");
    return next;
}

} // namespace armsim
