#include <doctest.h>

#include <sstream>

#include "armsim/armsim.hpp"

using namespace armsim;

namespace {

Scenario step_scenario() {
    Scenario sc;
    sc.arm = default_arm();
    sc.mode = ControlMode::pid;
    sc.task = TaskType::step;
    sc.step_joint = 1;
    sc.step_amplitude = deg_to_rad(30.0);
    sc.dt = 0.001;
    sc.duration = 5.0;
    sc.gains = default_gains(sc.arm);
    return sc;
}

} // namespace

TEST_CASE("zero gains in zero gravity: no actuation, error stays at the step size") {
    Scenario sc = step_scenario();
    sc.arm.gravity = {0.0, 0.0, 0.0};
    sc.gains.kp.setZero();
    sc.gains.ki.setZero();
    sc.gains.kd.setZero();
    sc.duration = 1.0;
    const SimResult r = run_scenario(sc);
    for (const auto& u : r.series.tau) CHECK(u.cwiseAbs().maxCoeff() == 0.0);
    for (const auto& q : r.series.q_act) CHECK(q.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.metrics.never_rose);
    CHECK(r.metrics.steady_state_error == doctest::Approx(deg_to_rad(30.0)).epsilon(1e-12));
}

TEST_CASE("default gains hit the committed step-response window") {
    const SimResult r = run_scenario(step_scenario());
    CHECK(r.metrics.settled);
    CHECK(r.metrics.overshoot_pct > 3.8);
    CHECK(r.metrics.overshoot_pct < 5.8);
    CHECK(r.metrics.settling_time_s > 1.4);
    CHECK(r.metrics.settling_time_s < 1.8);
}

TEST_CASE("same scenario and trial give bit-identical series") {
    Scenario sc = step_scenario();
    sc.noise.std_rad = deg_to_rad(0.3);
    sc.noise.seed = 99;
    sc.duration = 1.0;
    const SimResult a = run_scenario(sc, 3);
    const SimResult b = run_scenario(sc, 3);
    REQUIRE(a.series.t.size() == b.series.t.size());
    for (std::size_t k = 0; k < a.series.t.size(); ++k) {
        CHECK((a.series.q_act[k] - b.series.q_act[k]).norm() == 0.0);
        CHECK((a.series.q_meas[k] - b.series.q_meas[k]).norm() == 0.0);
        CHECK((a.series.tau[k] - b.series.tau[k]).norm() == 0.0);
    }
    std::ostringstream ca, cb;
    write_csv(ca, a.series);
    write_csv(cb, b.series);
    CHECK(ca.str() == cb.str());
}

TEST_CASE("different trial indices draw different noise") {
    Scenario sc = step_scenario();
    sc.noise.std_rad = deg_to_rad(0.3);
    sc.noise.seed = 99;
    sc.duration = 0.2;
    const SimResult a = run_scenario(sc, 0);
    const SimResult b = run_scenario(sc, 1);
    double diff = 0.0;
    for (std::size_t k = 0; k < a.series.t.size(); ++k)
        diff += (a.series.q_meas[k] - b.series.q_meas[k]).cwiseAbs().maxCoeff();
    CHECK(diff > 0.0);
}

TEST_CASE("noise perturbs only the measurement, never the plant state") {
    // With zero gains the controller output is zero regardless of what it
    // measures, so a noisy run's plant trajectory must match a clean run's.
    Scenario sc = step_scenario();
    sc.arm.gravity = {0.0, 0.0, 0.0};
    sc.gains.kp.setZero();
    sc.gains.ki.setZero();
    sc.gains.kd.setZero();
    sc.duration = 0.5;
    Scenario noisy = sc;
    noisy.noise.std_rad = deg_to_rad(1.0);
    noisy.noise.seed = 7;
    const SimResult clean = run_scenario(sc);
    const SimResult r = run_scenario(noisy);
    bool meas_differs = false;
    for (std::size_t k = 0; k < r.series.t.size(); ++k) {
        CHECK((r.series.q_act[k] - clean.series.q_act[k]).norm() == 0.0);
        if ((r.series.q_meas[k] - r.series.q_act[k]).norm() > 0.0) meas_differs = true;
    }
    CHECK(meas_differs);
}

TEST_CASE("perturbation scales the plant but not the nominal model") {
    const ArmModel nominal = default_arm();
    const Perturbation p{1.15, 1.20, 0.2};
    const ArmModel plant = apply_perturbation(nominal, p);
    for (int i = 0; i < 6; ++i) {
        CHECK(plant.joints[i].inertia ==
              doctest::Approx(1.15 * nominal.joints[i].inertia).epsilon(1e-12));
        CHECK(plant.joints[i].friction ==
              doctest::Approx(1.20 * nominal.joints[i].friction).epsilon(1e-12));
    }
    CHECK(plant.payload_mass == doctest::Approx(nominal.payload_mass + 0.2).epsilon(1e-12));
}

TEST_CASE("overheat trips the joint latch instead of crashing") {
    Scenario sc = step_scenario();
    sc.actuator.heat_capacity = 0.02; // tiny: trips within the run
    sc.duration = 2.0;
    const SimResult r = run_scenario(sc);
    CHECK(r.metrics.overheat);
    CHECK(r.metrics.peak_temp_c >= sc.actuator.shutdown_temp_c);
    // After the trip the recorded torque on the hot joint is zero.
    bool saw_zero_after_heat = false;
    for (std::size_t k = 0; k < r.series.t.size(); ++k)
        if (r.series.temp[k][1] >= sc.actuator.shutdown_temp_c && r.series.tau[k][1] == 0.0)
            saw_zero_after_heat = true;
    CHECK(saw_zero_after_heat);
}

TEST_CASE("torque saturation holds throughout a simulation") {
    Scenario sc = step_scenario();
    sc.gains.kp *= 50.0; // aggressive, still bounded
    sc.duration = 1.0;
    const SimResult r = run_scenario(sc);
    for (const auto& u : r.series.tau)
        for (int i = 0; i < 6; ++i) CHECK(std::abs(u[i]) <= sc.arm.joints[i].max_torque);
}

TEST_CASE("energy and temperature metrics are accumulated") {
    const SimResult r = run_scenario(step_scenario());
    CHECK(r.metrics.energy_j > 0.0);
    CHECK(r.metrics.peak_temp_c >= 25.0);
}

TEST_CASE("row count is duration/dt + 1 and time is uniform") {
    Scenario sc = step_scenario();
    sc.duration = 0.25;
    const SimResult r = run_scenario(sc);
    CHECK(r.series.t.size() == 251);
    for (std::size_t k = 0; k < r.series.t.size(); ++k)
        CHECK(r.series.t[k] == doctest::Approx(0.001 * k).epsilon(1e-12));
}

TEST_CASE("scenario validation") {
    Scenario sc = step_scenario();
    sc.dt = 0.02;
    CHECK_THROWS_AS(run_scenario(sc), ValidationError);
    sc = step_scenario();
    sc.duration = 0.0;
    CHECK_THROWS_AS(run_scenario(sc), ValidationError);
    sc = step_scenario();
    sc.task = TaskType::pick_place;
    sc.target = {5.0, 0.0, 0.0}; // beyond max reach
    CHECK_THROWS_AS(run_scenario(sc), UnreachableError);
}

TEST_CASE("pick-and-place batch statistics are deterministic and consistent") {
    Scenario sc;
    sc.arm = default_arm();
    sc.task = TaskType::pick_place;
    sc.target = {0.35, 0.05, 0.15};
    sc.gains = default_gains(sc.arm);
    sc.move_time = 1.0;
    sc.settle_time = 1.0;
    sc.noise.std_rad = deg_to_rad(0.3);
    sc.noise.seed = 1234;
    const PickPlaceBatch a = run_pick_place_trials(sc, 5);
    const PickPlaceBatch b = run_pick_place_trials(sc, 5);
    CHECK((a.stats.mean - b.stats.mean).norm() == 0.0);
    CHECK((a.stats.std_dev - b.stats.std_dev).norm() == 0.0);
    CHECK(a.stats.mean_norm == b.stats.mean_norm);
    CHECK(a.stats.trials == 5);

    // mean recomputed from the trial metrics
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& tm : a.trial_metrics) mean += tm.final_deviation;
    mean /= 5.0;
    CHECK((a.stats.mean - mean).norm() < 1e-15);
    CHECK_THROWS_AS(run_pick_place_trials(sc, 0), ValidationError);
}

TEST_CASE("tracking runner requires a track_path scenario") {
    CHECK_THROWS_AS(run_tracking(step_scenario()), ValidationError);
}

TEST_CASE("gentle multi-point path is tracked closely; weak gains degrade tracking") {
    Scenario sc;
    sc.arm = default_arm();
    sc.task = TaskType::track_path;
    sc.mode = ControlMode::pid;
    sc.gains = default_gains(sc.arm);
    sc.dt = 0.001;
    Vector6d w0 = Vector6d::Zero(), w1, w2;
    w1 << 0.4, 0.3, -0.3, 0.2, 0.2, -0.2;
    w2 << -0.2, 0.5, 0.1, -0.2, -0.1, 0.3;
    sc.waypoints = {w0, w1, w2};
    sc.segment_times = {2.0, 2.0};
    const SimResult r = run_tracking(sc);
    const double base_err = r.metrics.max_tracking_error.maxCoeff();
    CHECK(base_err < deg_to_rad(5.0));

    // A tenth of the bandwidth must track the same path noticeably worse.
    Scenario weak = sc;
    weak.gains.kp *= 0.1;
    weak.gains.ki *= 0.1;
    weak.gains.kd *= 0.1;
    const double weak_err = run_tracking(weak).metrics.max_tracking_error.maxCoeff();
    CHECK(weak_err > 2.0 * base_err);
}

TEST_CASE("csv output round-trips through the csv reader") {
    Scenario sc = step_scenario();
    sc.duration = 0.1;
    const SimResult r = run_scenario(sc);
    std::ostringstream out;
    write_csv(out, r.series);
    const CsvTable t = parse_csv(out.str());
    CHECK(t.header.size() == 1 + 7 * 6 + 3);
    CHECK(t.header.front() == "t_s");
    CHECK(t.header.back() == "ee_z_m");
    REQUIRE(t.rows.size() == r.series.t.size());
    const auto q2 = t.col("q_act_rad_2");
    for (std::size_t k = 0; k < q2.size(); ++k)
        CHECK(q2[k] == doctest::Approx(r.series.q_act[k][1]).epsilon(1e-8));
}

TEST_CASE("hybrid holds a gravity-loaded pose more tightly than pid") {
    Scenario sc;
    sc.arm = default_arm();
    sc.task = TaskType::pick_place;
    sc.target = {0.35, 0.05, 0.15};
    sc.gains = default_gains(sc.arm);
    sc.move_time = 1.0;
    sc.settle_time = 1.0;
    sc.perturbation.payload_add_kg = 0.2; // model mismatch to absorb
    sc.mode = ControlMode::pid;
    const double pid_err = run_scenario(sc).metrics.final_deviation.norm();
    sc.mode = ControlMode::hybrid;
    const double hyb_err = run_scenario(sc).metrics.final_deviation.norm();
    sc.mode = ControlMode::open_loop;
    const double ol_err = run_scenario(sc).metrics.final_deviation.norm();
    CHECK(hyb_err <= pid_err);
    CHECK(pid_err < ol_err);
}
