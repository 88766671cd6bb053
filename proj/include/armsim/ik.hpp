#pragma once

#include <cmath>

#include "armsim/arm_model.hpp"
#include "armsim/kinematics.hpp"
#include "armsim/types.hpp"

namespace armsim {

struct UnreachableError : Error {
    using Error::Error;
};

struct SingularConfigError : Error {
    using Error::Error;
};

struct IkOptions {
    double lambda = 0.01;    // damping
    int max_iters = 200;
    double tol = 1e-6;       // position tolerance, m
    double step_limit = 0.2; // max per-joint step per iteration, rad
};

struct IkResult {
    Vector6d q = Vector6d::Zero();
    int iterations = 0;
    double residual = 0.0; // m
    bool converged = false;
};

/// One damped-least-squares step: dq = J^T (J J^T + lambda^2 I)^-1 e.
inline Vector6d dls_step(const Matrix36d& jac, const Eigen::Vector3d& err, double lambda) {
    const Eigen::Matrix3d normal =
        jac * jac.transpose() + lambda * lambda * Eigen::Matrix3d::Identity();
    return jac.transpose() * normal.ldlt().solve(err);
}

/// Iterative position IK. Deterministic: fixed inputs give a bit-identical
/// result. Joint limits are enforced by clamping after every step, so the
/// returned q is always in-limit.
inline IkResult solve_position_ik(const ArmModel& arm, const Eigen::Vector3d& target,
                                  const Vector6d& seed, const IkOptions& opts = {}) {
    if (!target.allFinite())
        throw Error("solve_position_ik: non-finite target");
    if (target.norm() > arm.max_reach())
        throw UnreachableError("target " + std::to_string(target.norm()) +
                               " m from base exceeds max reach " +
                               std::to_string(arm.max_reach()) + " m");

    IkResult res;
    res.q = arm.clamp_to_limits(seed);
    Eigen::Vector3d err = target - forward_kinematics(arm, res.q).position;
    res.residual = err.norm();

    while (res.residual > opts.tol && res.iterations < opts.max_iters) {
        Vector6d dq = dls_step(position_jacobian(arm, res.q), err, opts.lambda);
        const double biggest = dq.cwiseAbs().maxCoeff();
        if (biggest > opts.step_limit)
            dq *= opts.step_limit / biggest;
        res.q = arm.clamp_to_limits(res.q + dq);
        ++res.iterations;
        err = target - forward_kinematics(arm, res.q).position;
        res.residual = err.norm();
    }
    res.converged = res.residual <= opts.tol;
    return res;
}

/// Inverse velocity kinematics: qdot = J^T (J J^T + lambda^2 I)^-1 xdot.
/// With lambda = 0 this is the exact pseudoinverse and throws near
/// singularities instead of producing unbounded rates.
inline Vector6d joint_velocities_from_cartesian(const ArmModel& arm, const Vector6d& q,
                                                const Eigen::Vector3d& xdot,
                                                double lambda = 0.01) {
    const Matrix36d jac = position_jacobian(arm, q);
    if (lambda == 0.0) {
        const Eigen::JacobiSVD<Matrix36d> svd(jac);
        const auto& sv = svd.singularValues();
        const double smin = sv[2], smax = sv[0];
        if (smin <= 0.0 || (smax * smax) / (smin * smin) > 1e12)
            throw SingularConfigError("Jacobian is singular; use lambda > 0");
    }
    return dls_step(jac, xdot, lambda);
}

} // namespace armsim
