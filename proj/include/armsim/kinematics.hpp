#pragma once

#include <array>
#include <cmath>

#include "armsim/arm_model.hpp"
#include "armsim/types.hpp"

namespace armsim {

struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
};

/// Single-link homogeneous transform, standard DH:
///   | c    -s*ca  s*sa  a*c |
///   | s     c*ca -c*sa  a*s |
///   | 0     sa    ca    d   |
///   | 0     0     0     1   |
/// with the joint variable theta shifted by the row's fixed offset.
inline Eigen::Matrix4d dh_transform(const DhRow& row, double theta) {
    const double th = theta + row.theta_offset;
    const double c = std::cos(th), s = std::sin(th);
    const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    Eigen::Matrix4d t;
    t << c, -s * ca, s * sa, row.a * c,
         s, c * ca, -c * sa, row.a * s,
         0.0, sa, ca, row.d,
         0.0, 0.0, 0.0, 1.0;
    return t;
}

/// Base frame plus the frame after each joint; frames[0] is identity.
inline std::array<Eigen::Matrix4d, 7> link_frames(const ArmModel& arm, const Vector6d& q) {
    std::array<Eigen::Matrix4d, 7> frames;
    frames[0] = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 6; ++i)
        frames[i + 1] = frames[i] * dh_transform(arm.rows[i], q[i]);
    return frames;
}

inline Pose forward_kinematics(const ArmModel& arm, const Vector6d& q) {
    const auto frames = link_frames(arm, q);
    Pose p;
    p.position = frames[6].block<3, 1>(0, 3);
    p.orientation = frames[6].block<3, 3>(0, 0);
    return p;
}

/// Geometric Jacobian, position rows only: column i is z_{i-1} x (p_ee - p_{i-1}).
inline Matrix36d position_jacobian(const ArmModel& arm, const Vector6d& q) {
    const auto frames = link_frames(arm, q);
    const Eigen::Vector3d p_ee = frames[6].block<3, 1>(0, 3);
    Matrix36d jac;
    for (int i = 0; i < 6; ++i) {
        const Eigen::Vector3d z = frames[i].block<3, 1>(0, 2);
        const Eigen::Vector3d p = frames[i].block<3, 1>(0, 3);
        jac.col(i) = z.cross(p_ee - p);
    }
    return jac;
}

/// Central-difference Jacobian of the FK position; test oracle for the
/// geometric Jacobian.
inline Matrix36d numeric_jacobian(const ArmModel& arm, const Vector6d& q, double h = 1e-6) {
    if (!(h > 0.0)) throw Error("numeric_jacobian: step h must be > 0");
    Matrix36d jac;
    for (int i = 0; i < 6; ++i) {
        Vector6d qp = q, qm = q;
        qp[i] += h;
        qm[i] -= h;
        jac.col(i) = (forward_kinematics(arm, qp).position -
                      forward_kinematics(arm, qm).position) / (2.0 * h);
    }
    return jac;
}

inline bool is_orthonormal(const Eigen::Matrix3d& r, double tol = 1e-9) {
    return (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(r.determinant() - 1.0) <= tol;
}

} // namespace armsim
