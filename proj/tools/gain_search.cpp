// Offline grid search for the default PID gains. Minimizes
// |overshoot - 4.8 pt| + 2*|settling - 1.6 s| on the joint-2 step scenario
// of the default arm, using the same anti-windup clamp that default_gains()
// applies (integral term bounded by the joint's full torque). Run once; the
// winner (kp=26, ki=9, kd=1.2) is frozen in include/armsim/scenario_io.hpp.
#include <cstdio>
#include <vector>

#include "armsim/armsim.hpp"

using namespace armsim;

int main() {
    const ArmModel arm = default_arm();

    Scenario base;
    base.arm = arm;
    base.mode = ControlMode::pid;
    base.task = TaskType::step;
    base.step_joint = 1;
    base.step_amplitude = deg_to_rad(30.0);
    base.dt = 0.001;
    base.duration = 5.0;

    const double i2 = arm.joints[1].inertia;
    double best_cost = 1e18;
    double best_kp = 0, best_ki = 0, best_kd = 0;

    std::vector<double> kps, kis, kds;
    for (double kp = 10.0; kp <= 26.001; kp += 1.0) kps.push_back(kp);
    for (double ki = 4.0; ki <= 14.001; ki += 0.5) kis.push_back(ki);
    for (double kd = 0.7; kd <= 2.00001; kd += 0.1) kds.push_back(kd);

    for (double kp : kps)
        for (double ki : kis)
            for (double kd : kds) {
                Scenario sc = base;
                for (int j = 0; j < 6; ++j) {
                    const double scale = arm.joints[j].inertia / i2;
                    sc.gains.kp[j] = kp * scale;
                    sc.gains.ki[j] = ki * scale;
                    sc.gains.kd[j] = kd * scale;
                    sc.gains.output_limit[j] = arm.joints[j].max_torque;
                    sc.gains.integral_limit[j] = arm.joints[j].max_torque / sc.gains.ki[j];
                }
                Metrics m;
                try {
                    m = run_scenario(sc).metrics;
                } catch (const Error&) {
                    continue;
                }
                if (!m.settled || m.never_rose) continue;
                const double cost =
                    std::abs(m.overshoot_pct - 4.8) + 2.0 * std::abs(m.settling_time_s - 1.6);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_kp = kp;
                    best_ki = ki;
                    best_kd = kd;
                    std::printf("kp=%.3f ki=%.3f kd=%.3f  overshoot=%.3f%%  settle=%.3fs  "
                                "cost=%.4f\n",
                                kp, ki, kd, m.overshoot_pct, m.settling_time_s, cost);
                }
            }

    std::printf("\nbest: kp=%.4f ki=%.4f kd=%.4f cost=%.4f\n", best_kp, best_ki, best_kd,
                best_cost);
    return 0;
}
