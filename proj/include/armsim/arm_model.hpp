#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "armsim/config.hpp"
#include "armsim/types.hpp"

namespace armsim {

/// Standard (distal) Denavit-Hartenberg row. The joint variable theta is
/// supplied at evaluation time; theta_offset is a fixed construction offset
/// added to it.
struct DhRow {
    double a = 0.0;            // link length, m
    double d = 0.0;            // link offset, m
    double alpha = 0.0;        // link twist, rad
    double theta_offset = 0.0; // rad
};

struct JointSpec {
    double limit_min = -kPi; // rad
    double limit_max = kPi;  // rad
    double max_torque = 5.0; // N*m
    double inertia = 0.01;   // effective inertia reflected at the joint, kg*m^2
    double friction = 0.02;  // viscous coefficient, N*m*s/rad
    double link_mass = 0.1;  // kg
    double com_offset = 0.0; // distance from the joint axis to the link COM along the link, m
};

struct ArmModel {
    std::array<DhRow, 6> rows{};
    std::array<JointSpec, 6> joints{};
    Eigen::Vector3d gravity{0.0, 0.0, -9.81};
    double payload_mass = 0.0; // attached at the end-effector, kg

    /// Conservative spherical reach bound around the base.
    double max_reach() const {
        double r = 0.0;
        for (const auto& row : rows) r += std::abs(row.a) + std::abs(row.d);
        return r;
    }

    Vector6d clamp_to_limits(const Vector6d& q) const {
        Vector6d out = q;
        for (int i = 0; i < 6; ++i)
            out[i] = std::clamp(out[i], joints[i].limit_min, joints[i].limit_max);
        return out;
    }

    bool within_limits(const Vector6d& q, double tol = 0.0) const {
        for (int i = 0; i < 6; ++i)
            if (q[i] < joints[i].limit_min - tol || q[i] > joints[i].limit_max + tol)
                return false;
        return true;
    }
};

/// Angles, rates, torques and motor temperatures at one instant.
struct JointState {
    Vector6d q = Vector6d::Zero();
    Vector6d qdot = Vector6d::Zero();
    Vector6d qddot = Vector6d::Zero();
    Vector6d tau = Vector6d::Zero();
    Vector6d temp = Vector6d::Constant(25.0); // deg C
};

inline void validate(const ArmModel& arm) {
    for (int i = 0; i < 6; ++i) {
        const auto& r = arm.rows[i];
        const std::string where = "dh row " + std::to_string(i + 1);
        if (!std::isfinite(r.a) || !std::isfinite(r.d) || !std::isfinite(r.alpha) ||
            !std::isfinite(r.theta_offset))
            throw ValidationError(where + ": non-finite value");
        if (r.a < 0.0)
            throw ValidationError(where + ": link length a must be >= 0");
        if (r.alpha < -kPi || r.alpha > kPi)
            throw ValidationError(where + ": alpha must lie in [-pi, pi]");

        const auto& j = arm.joints[i];
        const std::string jw = "joint " + std::to_string(i + 1);
        if (!(j.limit_min < j.limit_max))
            throw ValidationError(jw + ": limit_min must be < limit_max");
        if (!(j.inertia > 0.0))
            throw ValidationError(jw + ": inertia must be > 0");
        if (j.friction < 0.0)
            throw ValidationError(jw + ": friction must be >= 0");
        if (!(j.max_torque > 0.0))
            throw ValidationError(jw + ": max_torque must be > 0");
        if (j.link_mass < 0.0)
            throw ValidationError(jw + ": mass must be >= 0");
        if (j.com_offset < 0.0)
            throw ValidationError(jw + ": com_offset_m must be >= 0");
    }
    const double g = arm.gravity.norm();
    if (!(g >= 0.0 && g <= 20.0) || !arm.gravity.allFinite())
        throw ValidationError("world: gravity magnitude must lie in [0, 20]");
    if (arm.payload_mass < 0.0)
        throw ValidationError("world: payload_kg must be >= 0");
}

/// The committed reference arm. These constants are not taken from any
/// published prototype; they size a desk-scale 6R arm with ~0.63 m reach
/// so that centimeter-scale errors and sub-kilogram payloads are the
/// operating regime.
inline ArmModel default_arm() {
    ArmModel arm;
    arm.rows = {{
        {0.00, 0.10, kPi / 2, 0.0},
        {0.25, 0.00, 0.0, 0.0},
        {0.20, 0.00, 0.0, 0.0},
        {0.00, 0.00, kPi / 2, 0.0},
        {0.00, 0.00, -kPi / 2, 0.0},
        {0.00, 0.08, 0.0, 0.0},
    }};
    const double lim1 = deg_to_rad(170.0);
    const double lim2 = deg_to_rad(120.0);
    const double lim3 = deg_to_rad(150.0);
    arm.joints = {{
        // limit_min, limit_max, max_torque, inertia, friction, mass, com_offset
        {-lim1, lim1, 6.0, 0.020, 0.05, 0.15, 0.000},
        {-lim2, lim2, 8.0, 0.025, 0.06, 0.18, 0.125},
        {-lim3, lim3, 6.0, 0.015, 0.04, 0.12, 0.100},
        {-lim1, lim1, 3.0, 0.006, 0.02, 0.08, 0.000},
        {-lim2, lim2, 3.0, 0.005, 0.02, 0.06, 0.000},
        {-lim1, lim1, 2.0, 0.003, 0.01, 0.04, 0.000},
    }};
    arm.gravity = {0.0, 0.0, -9.81};
    arm.payload_mass = 0.0;
    return arm;
}

/// Parses the sectioned key-value arm schema: [dh] rows `row.N = a_m, d_m,
/// alpha_deg, theta_offset_deg`, six [joint.N] sections, and [world].
inline ArmModel load_model(const std::string& config_text) {
    const Config cfg = Config::parse(config_text);
    ArmModel arm;

    if (!cfg.has_section("dh"))
        throw ConfigError("missing section [dh]");
    const auto dh_keys = cfg.section_keys("dh");
    if (dh_keys.size() != 6)
        throw ValidationError("[dh]: exactly 6 rows required, got " +
                              std::to_string(dh_keys.size()));
    for (int i = 0; i < 6; ++i) {
        const std::string key = "row." + std::to_string(i + 1);
        const auto vals = cfg.get_doubles("dh", key);
        if (vals.size() != 4)
            throw ConfigError("[dh] " + key + ": expected a_m, d_m, alpha_deg, theta_offset_deg");
        arm.rows[i] = {vals[0], vals[1], deg_to_rad(vals[2]), deg_to_rad(vals[3])};
    }

    for (int i = 0; i < 6; ++i) {
        const std::string sec = "joint." + std::to_string(i + 1);
        if (!cfg.has_section(sec))
            throw ConfigError("missing section [" + sec + "]");
        JointSpec j;
        j.limit_min = deg_to_rad(cfg.get_double(sec, "limit_min_deg"));
        j.limit_max = deg_to_rad(cfg.get_double(sec, "limit_max_deg"));
        j.inertia = cfg.get_double(sec, "inertia");
        j.friction = cfg.get_double(sec, "friction");
        j.max_torque = cfg.get_double(sec, "max_torque");
        j.link_mass = cfg.get_double(sec, "mass");
        j.com_offset = cfg.get_double(sec, "com_offset_m");
        arm.joints[i] = j;
    }

    if (cfg.has("world", "gravity")) {
        const auto g = cfg.get_doubles("world", "gravity");
        if (g.size() != 3)
            throw ConfigError("[world] gravity: expected gx, gy, gz");
        arm.gravity = {g[0], g[1], g[2]};
    }
    arm.payload_mass = cfg.get_double("world", "payload_kg", 0.0);

    validate(arm);
    return arm;
}

/// Degree value whose parse recovers `rad` bit-exactly, when one exists
/// within a few ulp of the rounded conversion.
inline double exact_deg(double rad) {
    double g = rad_to_deg(rad);
    if (deg_to_rad(g) == rad) return g;
    for (int dir = -1; dir <= 1; dir += 2) {
        double cand = g;
        for (int k = 0; k < 4; ++k) {
            cand = std::nextafter(cand, dir > 0 ? HUGE_VAL : -HUGE_VAL);
            if (deg_to_rad(cand) == rad) return cand;
        }
    }
    return g;
}

inline std::string serialize_model(const ArmModel& arm) {
    std::ostringstream out;
    out.precision(17);
    out << "[dh]\n";
    for (int i = 0; i < 6; ++i) {
        const auto& r = arm.rows[i];
        out << "row." << (i + 1) << " = " << r.a << ", " << r.d << ", "
            << exact_deg(r.alpha) << ", " << exact_deg(r.theta_offset) << "\n";
    }
    for (int i = 0; i < 6; ++i) {
        const auto& j = arm.joints[i];
        out << "\n[joint." << (i + 1) << "]\n"
            << "limit_min_deg = " << exact_deg(j.limit_min) << "\n"
            << "limit_max_deg = " << exact_deg(j.limit_max) << "\n"
            << "inertia = " << j.inertia << "\n"
            << "friction = " << j.friction << "\n"
            << "max_torque = " << j.max_torque << "\n"
            << "mass = " << j.link_mass << "\n"
            << "com_offset_m = " << j.com_offset << "\n";
    }
    out << "\n[world]\n"
        << "gravity = " << arm.gravity.x() << ", " << arm.gravity.y() << ", "
        << arm.gravity.z() << "\n"
        << "payload_kg = " << arm.payload_mass << "\n";
    return out.str();
}

inline bool operator==(const DhRow& a, const DhRow& b) {
    return a.a == b.a && a.d == b.d && a.alpha == b.alpha && a.theta_offset == b.theta_offset;
}

inline bool operator==(const JointSpec& a, const JointSpec& b) {
    return a.limit_min == b.limit_min && a.limit_max == b.limit_max &&
           a.max_torque == b.max_torque && a.inertia == b.inertia &&
           a.friction == b.friction && a.link_mass == b.link_mass &&
           a.com_offset == b.com_offset;
}

inline bool operator==(const ArmModel& a, const ArmModel& b) {
    return a.rows == b.rows && a.joints == b.joints && a.gravity == b.gravity &&
           a.payload_mass == b.payload_mass;
}

} // namespace armsim
