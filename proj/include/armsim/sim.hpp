#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "armsim/actuator.hpp"
#include "armsim/arm_model.hpp"
#include "armsim/config.hpp"
#include "armsim/control.hpp"
#include "armsim/csv.hpp"
#include "armsim/dynamics.hpp"
#include "armsim/ik.hpp"
#include "armsim/kinematics.hpp"
#include "armsim/metrics.hpp"
#include "armsim/rng.hpp"
#include "armsim/trajectory.hpp"
#include "armsim/types.hpp"

namespace armsim {

struct UnstableSimulationError : Error {
    using Error::Error;
};

enum class TaskType { step, pick_place, track_path };

struct NoiseSpec {
    double std_rad = 0.0;
    std::uint64_t seed = 0;
    bool enabled() const { return std_rad > 0.0; }
};

/// Plant-vs-nominal parameter mismatch. Controllers always see the nominal
/// model; the integrated plant uses these multipliers.
struct Perturbation {
    double inertia_scale = 1.0;
    double friction_scale = 1.0;
    double payload_add_kg = 0.0;
};

struct ActuatorSpec {
    double c_e = 0.5;             // heating coefficient, W/(N*m)^2
    double heat_capacity = 5.0;   // J/K
    double initial_temp_c = 25.0;
    double shutdown_temp_c = 80.0;
};

struct Scenario {
    ArmModel arm; // nominal model
    ControlMode mode = ControlMode::pid;
    PidGains gains;
    double dt = 0.001;
    double duration = 5.0;
    TaskType task = TaskType::step;

    // step task
    int step_joint = 1;                      // 0-based
    double step_amplitude = deg_to_rad(30.0); // rad
    Vector6d start_q = Vector6d::Zero();
    double move_time = 1.0; // open-loop executes the step as a cubic over this

    // pick_place task
    Eigen::Vector3d target{0.35, 0.05, 0.15};
    int trials = 1;
    double settle_time = 1.0;

    // track_path task
    std::vector<Vector6d> waypoints;
    std::vector<double> segment_times;

    NoiseSpec noise;
    Perturbation perturbation;
    ActuatorSpec actuator;
};

/// All-zero joint vector; the documented home pose and default IK seed.
inline Vector6d home_pose() { return Vector6d::Zero(); }

inline ArmModel apply_perturbation(const ArmModel& nominal, const Perturbation& p) {
    ArmModel plant = nominal;
    for (auto& j : plant.joints) {
        j.inertia *= p.inertia_scale;
        j.friction *= p.friction_scale;
    }
    plant.payload_mass += p.payload_add_kg;
    return plant;
}

struct SimSeries {
    std::vector<double> t;
    std::vector<Vector6d> q_des, q_meas, q_act, qdot, tau;
    std::vector<std::array<long, 6>> pwm;
    std::vector<Vector6d> temp;
    std::vector<Eigen::Vector3d> ee;
};

struct Metrics {
    // step-task subset
    double overshoot_pct = 0.0;
    double settling_time_s = 0.0;
    bool settled = false;
    double rise_time_s = 0.0;
    bool never_rose = false;
    double steady_state_error = 0.0;
    // pick-and-place
    Eigen::Vector3d final_deviation = Eigen::Vector3d::Zero(); // final EE - target, m
    // tracking
    Vector6d max_tracking_error = Vector6d::Zero(); // rad
    // always
    double energy_j = 0.0;
    double peak_temp_c = 0.0;
    bool overheat = false;
};

struct SimResult {
    SimSeries series;
    Metrics metrics;
};

namespace detail {

struct DesiredTraj {
    bool use_path = false;
    JointPath path;
    Vector6d hold = Vector6d::Zero();

    void at(double t, Vector6d& q, Vector6d& qdot, Vector6d& qddot) const {
        if (use_path) {
            path.sample(t, q, qdot, qddot);
        } else {
            q = hold;
            qdot.setZero();
            qddot.setZero();
        }
    }
};

inline DesiredTraj build_desired(const Scenario& sc, const Vector6d& q_start,
                                 const Vector6d& q_goal) {
    DesiredTraj traj;
    switch (sc.task) {
    case TaskType::step:
        // Feedback controllers get the raw step; open loop cannot act on a
        // discontinuity, so the step is executed as a rest-to-rest cubic.
        if (sc.mode == ControlMode::open_loop) {
            traj.use_path = true;
            traj.path = plan_multipoint({q_start, q_goal}, {sc.move_time});
        } else {
            traj.hold = q_goal;
        }
        break;
    case TaskType::pick_place:
        traj.use_path = true;
        traj.path = plan_multipoint({q_start, q_goal}, {sc.move_time});
        break;
    case TaskType::track_path:
        traj.use_path = true;
        traj.path = plan_multipoint(sc.waypoints, sc.segment_times);
        break;
    }
    return traj;
}

} // namespace detail

/// Fixed-step closed-loop simulation of one scenario (one trial).
/// Measurement noise, when enabled, perturbs only the angles fed to the
/// controller; the plant state is exact. Deterministic for a fixed
/// (scenario, trial_index).
inline SimResult run_scenario(const Scenario& sc, int trial_index = 0) {
    if (!(sc.dt > 0.0 && sc.dt <= 0.01))
        throw ValidationError("scenario: dt must lie in (0, 0.01]");
    if (!(sc.duration > 0.0))
        throw ValidationError("scenario: duration must be > 0");
    if (sc.trials < 1)
        throw ValidationError("scenario: trial count must be >= 1");

    const ArmModel& nominal = sc.arm;
    const ArmModel plant = apply_perturbation(nominal, sc.perturbation);

    // Resolve start and goal joint vectors.
    Vector6d q_start = sc.start_q;
    Vector6d q_goal = q_start;
    double duration = sc.duration;
    switch (sc.task) {
    case TaskType::step:
        q_goal[sc.step_joint] += sc.step_amplitude;
        q_goal = nominal.clamp_to_limits(q_goal);
        break;
    case TaskType::pick_place: {
        const IkResult ik = solve_position_ik(nominal, sc.target, home_pose());
        if (!ik.converged)
            throw Error("pick_place: IK did not converge on the target");
        q_goal = ik.q;
        duration = sc.move_time + sc.settle_time;
        break;
    }
    case TaskType::track_path:
        if (sc.waypoints.size() < 2)
            throw ValidationError("track_path: need at least 2 waypoints");
        q_start = sc.waypoints.front();
        duration = 0.0;
        for (double t : sc.segment_times) duration += t;
        break;
    }

    const detail::DesiredTraj traj = detail::build_desired(sc, q_start, q_goal);

    GaussianStream rng(GaussianStream::derive_seed(sc.noise.seed,
                                                   static_cast<std::uint64_t>(trial_index)));

    // Per-joint PWM calibration across the joint's limit range.
    std::array<PwmCalibration, 6> pwm_cal;
    for (int i = 0; i < 6; ++i)
        pwm_cal[i] = calibrate_pwm({nominal.joints[i].limit_min, 500.0},
                                   {nominal.joints[i].limit_max, 2500.0});

    std::array<ThermalState, 6> thermal;
    for (auto& th : thermal) {
        th.temp = sc.actuator.initial_temp_c;
        th.initial_temp = sc.actuator.initial_temp_c;
        th.heat_capacity = sc.actuator.heat_capacity;
        th.shutdown_temp = sc.actuator.shutdown_temp_c;
    }
    std::array<bool, 6> tripped{};

    JointState state;
    state.q = nominal.clamp_to_limits(q_start);
    state.temp = Vector6d::Constant(sc.actuator.initial_temp_c);

    ControllerState ctrl;
    ctrl.mode = sc.mode;
    // The servo has been holding the start pose in closed loop before t=0,
    // so the feedback integrator begins settled: it carries whatever torque
    // the actual plant needed there, minus anything the mode's feedforward
    // already supplies. Without this the integral winds up from zero and the
    // initial transient is unphysical.
    if (sc.mode == ControlMode::pid || sc.mode == ControlMode::hybrid) {
        Vector6d tau0 = gravity_torque(plant, state.q);
        if (sc.mode == ControlMode::hybrid) {
            Vector6d q0, qd0, qdd0;
            traj.at(0.0, q0, qd0, qdd0);
            tau0 -= gravity_torque(nominal, q0);
        }
        for (int i = 0; i < 6; ++i)
            if (sc.gains.ki[i] > 0.0)
                ctrl.integral[i] = std::clamp(tau0[i] / sc.gains.ki[i],
                                              -sc.gains.integral_limit[i],
                                              sc.gains.integral_limit[i]);
    }

    const auto steps = static_cast<std::size_t>(std::llround(duration / sc.dt));
    SimResult res;
    auto& s = res.series;
    s.t.reserve(steps + 1);

    Vector6d q_des, qdot_des, qddot_des;
    double energy = 0.0;
    double peak_temp = sc.actuator.initial_temp_c;

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * sc.dt;
        traj.at(t, q_des, qdot_des, qddot_des);

        Vector6d q_meas = state.q;
        if (sc.noise.enabled())
            for (int i = 0; i < 6; ++i) q_meas[i] += sc.noise.std_rad * rng.next();

        Vector6d u;
        switch (sc.mode) {
        case ControlMode::open_loop:
            u = open_loop_command(nominal, q_des, qdot_des, qddot_des);
            break;
        case ControlMode::pid: {
            auto out = pid_update(sc.gains, ctrl, q_des - q_meas, sc.dt);
            u = out.u;
            ctrl = out.state;
            break;
        }
        case ControlMode::hybrid: {
            auto out = hybrid_update(sc.gains, ctrl, q_des - q_meas, sc.dt, nominal, q_des);
            u = out.u;
            ctrl = out.state;
            break;
        }
        }

        for (int i = 0; i < 6; ++i) {
            u[i] = std::clamp(u[i], -nominal.joints[i].max_torque,
                              nominal.joints[i].max_torque);
            if (tripped[i]) u[i] = 0.0; // over-temperature latch
        }

        // Record the state at t together with the torque applied over
        // [t, t+dt]. The final row keeps the last applied torque.
        s.t.push_back(t);
        s.q_des.push_back(q_des);
        s.q_meas.push_back(q_meas);
        s.q_act.push_back(state.q);
        s.qdot.push_back(state.qdot);
        s.tau.push_back(u);
        std::array<long, 6> pw{};
        for (int i = 0; i < 6; ++i) pw[i] = angle_to_pwm(pwm_cal[i], state.q[i]);
        s.pwm.push_back(pw);
        Vector6d temps;
        for (int i = 0; i < 6; ++i) temps[i] = thermal[i].temp;
        s.temp.push_back(temps);
        s.ee.push_back(forward_kinematics(nominal, state.q).position);
        peak_temp = std::max(peak_temp, temps.maxCoeff());

        if (k == steps) break;

        JointState next;
        try {
            next = integrate_step(plant, state, u, sc.dt);
        } catch (const NonFiniteStateError& e) {
            throw UnstableSimulationError(std::string(e.what()) + " at step " +
                                          std::to_string(k));
        }
        for (int i = 0; i < 6; ++i) {
            thermal[i] = thermal_step(thermal[i], sc.actuator.c_e * next.tau[i] * next.tau[i],
                                      sc.dt);
            if (overheated(thermal[i])) {
                tripped[i] = true;
                res.metrics.overheat = true;
            }
            energy += std::abs(next.tau[i] * next.qdot[i]) * sc.dt;
        }
        for (int i = 0; i < 6; ++i) next.temp[i] = thermal[i].temp;
        state = next;
    }

    // Metrics
    auto& m = res.metrics;
    m.energy_j = energy;
    m.peak_temp_c = peak_temp;
    if (sc.task == TaskType::step) {
        std::vector<double> y;
        y.reserve(s.q_act.size());
        for (const auto& q : s.q_act) y.push_back(q[sc.step_joint]);
        const double target = q_goal[sc.step_joint];
        const double initial = q_start[sc.step_joint];
        try {
            const StepMetrics sm = compute_step_metrics(y, target, initial, sc.dt);
            m.overshoot_pct = sm.overshoot_pct;
            m.settling_time_s = sm.settling_time_s;
            m.settled = sm.settled;
            m.rise_time_s = sm.rise_time_s;
            m.steady_state_error = sm.steady_state_error;
        } catch (const NeverRisesError&) {
            m.never_rose = true;
            m.settling_time_s = duration;
            m.rise_time_s = duration;
            m.steady_state_error = std::abs(y.back() - target);
        }
    }
    if (sc.task == TaskType::pick_place) {
        m.final_deviation = s.ee.back() - sc.target;
        // Arrival metrics on the end-effector distance-to-target signal:
        // "settling" is when the EE stays within 2% of the initial distance,
        // "overshoot" is any excursion past the target along that signal.
        std::vector<double> dist;
        dist.reserve(s.ee.size());
        for (const auto& p : s.ee) dist.push_back((p - sc.target).norm());
        const double d0 = dist.front();
        if (d0 > 0.0) {
            try {
                const StepMetrics sm = compute_step_metrics(dist, 0.0, d0, sc.dt);
                m.overshoot_pct = sm.overshoot_pct;
                m.settling_time_s = sm.settling_time_s;
                m.settled = sm.settled;
                m.rise_time_s = sm.rise_time_s;
                m.steady_state_error = sm.steady_state_error;
            } catch (const NeverRisesError&) {
                m.never_rose = true;
                m.settling_time_s = duration;
                m.rise_time_s = duration;
                m.steady_state_error = dist.back();
            }
        }
    }
    for (std::size_t k = 0; k < s.t.size(); ++k)
        for (int i = 0; i < 6; ++i)
            m.max_tracking_error[i] =
                std::max(m.max_tracking_error[i], std::abs(s.q_des[k][i] - s.q_act[k][i]));
    return res;
}

inline void write_csv(std::ostream& out, const SimSeries& s) {
    out << "t_s";
    auto cols = [&](const std::string& base) {
        for (int i = 1; i <= 6; ++i) out << "," << base << "_" << i;
    };
    cols("q_des_rad");
    cols("q_meas_rad");
    cols("q_act_rad");
    cols("qdot_rad_s");
    cols("tau_nm");
    cols("pwm_us");
    cols("temp_c");
    out << ",ee_x_m,ee_y_m,ee_z_m\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        out << csv_double(s.t[k]);
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.q_des[k][i]);
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.q_meas[k][i]);
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.q_act[k][i]);
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.qdot[k][i]);
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.tau[k][i]);
        for (int i = 0; i < 6; ++i) out << "," << s.pwm[k][i];
        for (int i = 0; i < 6; ++i) out << "," << csv_double(s.temp[k][i]);
        out << "," << csv_double(s.ee[k].x()) << "," << csv_double(s.ee[k].y()) << ","
            << csv_double(s.ee[k].z()) << "\n";
    }
}

struct DeviationStats {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();    // signed mean per axis, m
    Eigen::Vector3d std_dev = Eigen::Vector3d::Zero(); // sample std per axis, m
    Eigen::Vector3d max_abs = Eigen::Vector3d::Zero(); // m
    double mean_norm = 0.0;                            // mean Euclidean deviation, m
    int trials = 0;
};

struct PickPlaceBatch {
    DeviationStats stats;
    std::vector<Metrics> trial_metrics;
};

/// Repeatability batch: n independent trials of the pick-and-place task.
/// Trial i draws its noise stream from a seed derived from (seed, i), so
/// results do not depend on execution order.
inline PickPlaceBatch run_pick_place_trials(const Scenario& sc, int n_trials) {
    if (n_trials < 1) throw ValidationError("n_trials must be >= 1");
    PickPlaceBatch batch;
    std::vector<Eigen::Vector3d> devs;
    devs.reserve(static_cast<std::size_t>(n_trials));
    for (int i = 0; i < n_trials; ++i) {
        SimResult r = run_scenario(sc, i);
        devs.push_back(r.metrics.final_deviation);
        batch.trial_metrics.push_back(r.metrics);
    }
    auto& st = batch.stats;
    st.trials = n_trials;
    for (const auto& d : devs) {
        st.mean += d;
        st.mean_norm += d.norm();
        st.max_abs = st.max_abs.cwiseMax(d.cwiseAbs());
    }
    st.mean /= static_cast<double>(n_trials);
    st.mean_norm /= static_cast<double>(n_trials);
    if (n_trials > 1) {
        Eigen::Vector3d var = Eigen::Vector3d::Zero();
        for (const auto& d : devs) var += (d - st.mean).cwiseAbs2();
        st.std_dev = (var / static_cast<double>(n_trials - 1)).cwiseSqrt();
    }
    return batch;
}

/// Multi-point trajectory tracking run (Figure-4 style scenario).
inline SimResult run_tracking(const Scenario& sc) {
    if (sc.task != TaskType::track_path)
        throw ValidationError("run_tracking expects a track_path scenario");
    return run_scenario(sc);
}

struct Table1Row {
    std::string controller;
    double mean_error_cm = 0.0;
    double overshoot_pct = 0.0;
    double settling_time_s = 0.0;
    bool settled = false;
};

struct Table1Report {
    std::array<Table1Row, 3> rows; // open_loop, pid, hybrid
};

/// Controller comparison: the identical pick-and-place batch under each
/// control law. Overshoot and settling are the per-trial arrival metrics
/// (end-effector distance to target) averaged over the batch; trials that
/// never settle contribute the full trial duration.
inline Table1Report run_table1(const Scenario& base) {
    Table1Report report;
    const std::array<ControlMode, 3> modes = {ControlMode::open_loop, ControlMode::pid,
                                              ControlMode::hybrid};
    const std::array<const char*, 3> names = {"open_loop", "pid", "hybrid"};
    for (int i = 0; i < 3; ++i) {
        Scenario sc = base;
        sc.mode = modes[i];
        sc.task = TaskType::pick_place;
        const PickPlaceBatch batch = run_pick_place_trials(sc, base.trials);

        Table1Row row;
        row.controller = names[i];
        row.mean_error_cm = batch.stats.mean_norm * 100.0;
        row.settled = true;
        for (const Metrics& tm : batch.trial_metrics) {
            row.overshoot_pct += tm.overshoot_pct;
            row.settling_time_s += tm.settling_time_s;
            if (!tm.settled || tm.never_rose) row.settled = false;
        }
        const double n = static_cast<double>(batch.trial_metrics.size());
        row.overshoot_pct /= n;
        row.settling_time_s /= n;
        report.rows[i] = row;
    }
    return report;
}

} // namespace armsim
