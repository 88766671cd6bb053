#pragma once

#include <string>
#include <vector>

#include "armsim/config.hpp"
#include "armsim/ik.hpp"
#include "armsim/sim.hpp"
#include "armsim/types.hpp"

namespace armsim {

/// The committed calibration gains, found once by offline grid search on the
/// joint-2 step scenario (tools/gain_search.cpp) and frozen. Per-joint gains
/// follow the joint inertia ratio so all joints share the tuned dynamics.
inline PidGains default_gains(const ArmModel& arm) {
    // Tuned for joint 2 (I = 0.025); other joints follow the inertia ratio.
    const double kp2 = 26.0, ki2 = 9.0, kd2 = 1.2;
    const double i2 = 0.025;
    PidGains g;
    for (int i = 0; i < 6; ++i) {
        const double scale = arm.joints[i].inertia / i2;
        g.kp[i] = kp2 * scale;
        g.ki[i] = ki2 * scale;
        g.kd[i] = kd2 * scale;
        g.output_limit[i] = arm.joints[i].max_torque;
        // Anti-windup sized so the integral term alone can at most demand
        // full torque: enough headroom to trim any holdable load, never more.
        g.integral_limit[i] = g.ki[i] > 0.0 ? arm.joints[i].max_torque / g.ki[i] : 10.0;
    }
    return g;
}

namespace detail {

inline Vector6d six_from(const Config& cfg, const std::string& sec, const std::string& key,
                         const Vector6d& fallback) {
    if (!cfg.has(sec, key)) return fallback;
    const auto v = cfg.get_doubles(sec, key);
    Vector6d out;
    if (v.size() == 1) {
        out.setConstant(v[0]);
    } else if (v.size() == 6) {
        for (int i = 0; i < 6; ++i) out[i] = v[i];
    } else {
        throw ConfigError("[" + sec + "] " + key + ": expected 1 or 6 values");
    }
    return out;
}

} // namespace detail

/// Builds a Scenario from a parsed scenario config. Sections: [task],
/// [controller], [noise], [perturbation], [actuator], [output]. Cartesian
/// waypoints ("cart: x, y, z") are converted to joint space immediately via
/// position IK seeded at the home pose.
inline Scenario load_scenario(const Config& cfg, const ArmModel& arm) {
    Scenario sc;
    sc.arm = arm;

    const std::string type = cfg.get_string("task", "type");
    if (type == "step")
        sc.task = TaskType::step;
    else if (type == "pick_place")
        sc.task = TaskType::pick_place;
    else if (type == "track_path")
        sc.task = TaskType::track_path;
    else
        throw ConfigError("[task] type: unknown task '" + type + "'");

    sc.dt = cfg.get_double("task", "dt", 0.001);
    sc.duration = cfg.get_double("task", "duration", 5.0);
    if (!(sc.dt > 0.0 && sc.dt <= 0.01))
        throw ValidationError("[task] dt must lie in (0, 0.01]");
    if (!(sc.duration > 0.0))
        throw ValidationError("[task] duration must be > 0");

    const Vector6d start_deg = detail::six_from(cfg, "task", "start_deg", Vector6d::Zero());
    for (int i = 0; i < 6; ++i) sc.start_q[i] = deg_to_rad(start_deg[i]);
    sc.move_time = cfg.get_double("task", "move_time", 1.0);

    if (sc.task == TaskType::step) {
        const long long joint = cfg.get_int("task", "joint", 2);
        if (joint < 1 || joint > 6)
            throw ValidationError("[task] joint must be 1..6");
        sc.step_joint = static_cast<int>(joint - 1);
        sc.step_amplitude = deg_to_rad(cfg.get_double("task", "amplitude_deg", 30.0));
    } else if (sc.task == TaskType::pick_place) {
        const auto tgt = cfg.get_doubles("task", "target_m");
        if (tgt.size() != 3) throw ConfigError("[task] target_m: expected x, y, z");
        sc.target = {tgt[0], tgt[1], tgt[2]};
        sc.trials = static_cast<int>(cfg.get_int("task", "trials", 1));
        if (sc.trials < 1) throw ValidationError("[task] trials must be >= 1");
        sc.settle_time = cfg.get_double("task", "settle_time", 1.0);
    } else {
        // track_path: waypoint.N entries plus matching time.N entries.
        for (int n = 1;; ++n) {
            const std::string wkey = "waypoint." + std::to_string(n);
            if (!cfg.has("task", wkey)) break;
            const std::string raw = cfg.get_string("task", wkey);
            const auto colon = raw.find(':');
            if (colon == std::string::npos)
                throw ConfigError("[task] " + wkey + ": expected 'joint: ...' or 'cart: ...'");
            const std::string tag = raw.substr(0, colon);
            Config one;
            one.set("task", wkey, raw.substr(colon + 1));
            const auto vals = one.get_doubles("task", wkey);
            Vector6d wp;
            if (tag == "joint") {
                if (vals.size() != 6)
                    throw ConfigError("[task] " + wkey + ": joint waypoint needs 6 angles (deg)");
                for (int i = 0; i < 6; ++i) wp[i] = deg_to_rad(vals[i]);
            } else if (tag == "cart") {
                if (vals.size() != 3)
                    throw ConfigError("[task] " + wkey + ": cart waypoint needs x, y, z (m)");
                const Vector6d seed = sc.waypoints.empty() ? home_pose() : sc.waypoints.back();
                const IkResult ik =
                    solve_position_ik(arm, {vals[0], vals[1], vals[2]}, seed);
                if (!ik.converged)
                    throw Error("[task] " + wkey + ": IK did not converge");
                wp = ik.q;
            } else {
                throw ConfigError("[task] " + wkey + ": unknown mode tag '" + tag + "'");
            }
            sc.waypoints.push_back(wp);
        }
        for (int n = 1;; ++n) {
            const std::string tkey = "time." + std::to_string(n);
            if (!cfg.has("task", tkey)) break;
            sc.segment_times.push_back(cfg.get_double("task", tkey));
        }
        if (sc.waypoints.size() < 2)
            throw ValidationError("[task] track_path needs at least 2 waypoints");
        if (sc.segment_times.size() != sc.waypoints.size() - 1)
            throw MismatchedLengthsError("[task] need one time.N per waypoint pair");
    }

    const std::string mode = cfg.get_string("controller", "mode", "pid");
    if (mode == "pid")
        sc.mode = ControlMode::pid;
    else if (mode == "open_loop")
        sc.mode = ControlMode::open_loop;
    else if (mode == "hybrid")
        sc.mode = ControlMode::hybrid;
    else
        throw ConfigError("[controller] mode: unknown mode '" + mode + "'");

    const PidGains defaults = default_gains(arm);
    sc.gains.kp = detail::six_from(cfg, "controller", "kp", defaults.kp);
    sc.gains.ki = detail::six_from(cfg, "controller", "ki", defaults.ki);
    sc.gains.kd = detail::six_from(cfg, "controller", "kd", defaults.kd);
    sc.gains.output_limit =
        detail::six_from(cfg, "controller", "output_limit", defaults.output_limit);
    sc.gains.integral_limit =
        detail::six_from(cfg, "controller", "integral_limit", defaults.integral_limit);
    for (int i = 0; i < 6; ++i) {
        if (sc.gains.kp[i] < 0 || sc.gains.ki[i] < 0 || sc.gains.kd[i] < 0)
            throw ValidationError("[controller] gains must be >= 0");
        if (sc.gains.output_limit[i] > arm.joints[i].max_torque)
            throw ValidationError("[controller] output_limit exceeds joint max_torque");
    }

    if (cfg.has_section("noise")) {
        sc.noise.std_rad = deg_to_rad(cfg.get_double("noise", "std_deg", 0.0));
        if (sc.noise.enabled()) {
            if (!cfg.has("noise", "seed"))
                throw ValidationError("[noise] seed is mandatory when noise is enabled");
            sc.noise.seed = static_cast<std::uint64_t>(cfg.get_int("noise", "seed"));
        }
    }

    if (cfg.has_section("perturbation")) {
        sc.perturbation.inertia_scale = cfg.get_double("perturbation", "inertia_scale", 1.0);
        sc.perturbation.friction_scale = cfg.get_double("perturbation", "friction_scale", 1.0);
        sc.perturbation.payload_add_kg = cfg.get_double("perturbation", "payload_kg", 0.0);
    }

    if (cfg.has_section("actuator")) {
        sc.actuator.c_e = cfg.get_double("actuator", "c_e", 0.5);
        sc.actuator.heat_capacity = cfg.get_double("actuator", "heat_capacity", 5.0);
        sc.actuator.initial_temp_c = cfg.get_double("actuator", "initial_temp_c", 25.0);
        sc.actuator.shutdown_temp_c = cfg.get_double("actuator", "shutdown_temp_c", 80.0);
    }

    return sc;
}

} // namespace armsim
