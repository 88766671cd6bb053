// armsim command line: FK/IK queries, scenario simulation and the
// controller-comparison report.
//
// Exit codes: 0 success, 2 config/usage error, 3 IK did not converge,
// 4 target unreachable, 5 unstable simulation.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "armsim/armsim.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw armsim::ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

armsim::ArmModel load_arm(const std::string& path) {
    if (path.empty()) return armsim::default_arm();
    return armsim::load_model(read_file(path));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw armsim::ConfigError("cannot write '" + path + "'");
    out << content;
}

void print_metrics(const armsim::Scenario& sc, const armsim::Metrics& m) {
    using armsim::rad_to_deg;
    std::printf("-- metrics --\n");
    if (sc.task == armsim::TaskType::step) {
        std::printf("overshoot_pct        %.4f\n", m.overshoot_pct);
        if (m.settled)
            std::printf("settling_time_s      %.4f\n", m.settling_time_s);
        else
            std::printf("settling_time_s      unsettled (>= %.4f)\n", m.settling_time_s);
        if (m.never_rose)
            std::printf("rise_time_s          never rose\n");
        else
            std::printf("rise_time_s          %.4f\n", m.rise_time_s);
        std::printf("steady_state_error   %.6f rad\n", m.steady_state_error);
    }
    if (sc.task == armsim::TaskType::pick_place) {
        std::printf("final_deviation_m    %.6f %.6f %.6f  (|.| = %.6f)\n",
                    m.final_deviation.x(), m.final_deviation.y(), m.final_deviation.z(),
                    m.final_deviation.norm());
    }
    std::printf("max_tracking_err_deg");
    for (int i = 0; i < 6; ++i) std::printf(" %.4f", rad_to_deg(m.max_tracking_error[i]));
    std::printf("\n");
    std::printf("energy_j             %.6f\n", m.energy_j);
    std::printf("peak_temp_c          %.4f\n", m.peak_temp_c);
    if (m.overheat) std::printf("overheat             yes (torque zeroed on tripped joints)\n");
}

void emit_svg(const std::string& base_path, const armsim::Scenario& sc,
              const armsim::SimSeries& s) {
    using armsim::SvgSeries;
    std::vector<SvgSeries> lines;
    const int focus = sc.task == armsim::TaskType::step ? sc.step_joint : -1;
    for (int j = 0; j < 6; ++j) {
        if (focus >= 0 && j != focus) continue;
        SvgSeries des{"q_des " + std::to_string(j + 1), s.t, {}};
        SvgSeries act{"q_act " + std::to_string(j + 1), s.t, {}};
        des.y.reserve(s.t.size());
        act.y.reserve(s.t.size());
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            des.y.push_back(s.q_des[k][j]);
            act.y.push_back(s.q_act[k][j]);
        }
        lines.push_back(std::move(des));
        lines.push_back(std::move(act));
    }
    std::ostringstream svg;
    armsim::write_svg_plot(svg, "joint angles: desired vs actual", lines);
    write_file(base_path, svg.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"armsim: 6-DOF serial arm kinematics, control and simulation"};
    app.require_subcommand(1);

    std::string arm_path, scenario_path, out_path = "out.csv", format = "csv";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto* fk = app.add_subcommand("fk", "forward kinematics of six joint angles (deg)");
    std::vector<double> fk_angles;
    fk->add_option("--arm", arm_path, "arm config file (default: built-in arm)");
    fk->add_option("angles", fk_angles, "six joint angles, degrees")->expected(6);

    auto* ik = app.add_subcommand("ik", "position IK for a Cartesian target (m)");
    std::vector<double> ik_target;
    std::string ik_seed_deg;
    ik->add_option("--arm", arm_path, "arm config file");
    ik->add_option("target", ik_target, "target x y z, meters")->expected(3);
    ik->add_option("--seed-deg", ik_seed_deg,
                   "comma-separated six seed angles, degrees (default: home pose)");

    auto* sim = app.add_subcommand("simulate", "run a scenario file");
    std::string report_kind;
    sim->add_option("--arm", arm_path, "arm config file");
    sim->add_option("--scenario", scenario_path, "scenario file")->required();
    sim->add_option("--out", out_path, "output CSV path (SVG goes next to it)");
    sim->add_option("--format", format, "csv|svg|both")
        ->check(CLI::IsMember({"csv", "svg", "both"}));
    sim->add_option("--set", overrides, "override scenario keys, section.key=value");
    sim->add_option("--seed", seed, "override the noise seed")->trigger_on_parse();
    sim->add_option("--report", report_kind, "emit a report instead (table1)");

    auto* rep = app.add_subcommand("report", "controller comparison (table1) for a scenario");
    rep->add_option("--arm", arm_path, "arm config file");
    rep->add_option("--scenario", scenario_path, "scenario file")->required();
    rep->add_option("--out", out_path, "optional CSV path for the table");
    rep->add_option("--set", overrides, "override scenario keys, section.key=value");

    CLI11_PARSE(app, argc, argv);
    seed_given = sim->count("--seed") > 0;

    try {
        const armsim::ArmModel arm = load_arm(arm_path);

        if (fk->parsed()) {
            armsim::Vector6d q;
            for (int i = 0; i < 6; ++i) q[i] = armsim::deg_to_rad(fk_angles[i]);
            if (!arm.within_limits(q))
                std::fprintf(stderr, "warning: angles outside joint limits\n");
            const armsim::Pose p = armsim::forward_kinematics(arm, q);
            std::printf("position_m %.6f %.6f %.6f\n", p.position.x(), p.position.y(),
                        p.position.z());
            for (int r = 0; r < 3; ++r)
                std::printf("rotation   %+.6f %+.6f %+.6f\n", p.orientation(r, 0),
                            p.orientation(r, 1), p.orientation(r, 2));
            return 0;
        }

        if (ik->parsed()) {
            armsim::Vector6d q_seed = armsim::home_pose();
            if (!ik_seed_deg.empty()) {
                armsim::Config one;
                one.set("cli", "seed", ik_seed_deg);
                const auto v = one.get_doubles("cli", "seed");
                if (v.size() != 6) throw armsim::ConfigError("--seed-deg needs 6 angles");
                for (int i = 0; i < 6; ++i) q_seed[i] = armsim::deg_to_rad(v[i]);
            }
            armsim::IkResult res;
            try {
                res = armsim::solve_position_ik(arm, {ik_target[0], ik_target[1], ik_target[2]},
                                                q_seed);
            } catch (const armsim::UnreachableError& e) {
                std::fprintf(stderr, "unreachable: %s\n", e.what());
                return 4;
            }
            std::printf("angles_deg");
            for (int i = 0; i < 6; ++i) std::printf(" %.6f", armsim::rad_to_deg(res.q[i]));
            std::printf("\nresidual_m %.9g\niterations %d\nconverged  %s\n", res.residual,
                        res.iterations, res.converged ? "yes" : "no");
            return res.converged ? 0 : 3;
        }

        // simulate / report
        armsim::Config cfg = armsim::Config::parse(read_file(scenario_path));
        for (const auto& ov : overrides) cfg.set_dotted(ov);
        if (seed_given) cfg.set("noise", "seed", std::to_string(seed));
        const armsim::Scenario sc = armsim::load_scenario(cfg, arm);

        if (rep->parsed() || report_kind == "table1") {
            if (!report_kind.empty() && report_kind != "table1")
                throw armsim::ConfigError("unknown report '" + report_kind + "'");
            const armsim::Table1Report t = armsim::run_table1(sc);
            std::printf("%-12s %-16s %-14s %-16s\n", "controller", "mean_error_cm",
                        "overshoot_pct", "settling_time_s");
            std::ostringstream csv;
            csv << "controller,mean_error_cm,overshoot_pct,settling_time_s,settled\n";
            for (const auto& row : t.rows) {
                std::printf("%-12s %-16.4f %-14.4f %-16.4f%s\n", row.controller.c_str(),
                            row.mean_error_cm, row.overshoot_pct, row.settling_time_s,
                            row.settled ? "" : " (unsettled)");
                csv << row.controller << "," << armsim::csv_double(row.mean_error_cm) << ","
                    << armsim::csv_double(row.overshoot_pct) << ","
                    << armsim::csv_double(row.settling_time_s) << ","
                    << (row.settled ? 1 : 0) << "\n";
            }
            if (rep->parsed() && rep->count("--out") > 0) write_file(out_path, csv.str());
            return 0;
        }

        if (sc.task == armsim::TaskType::pick_place && sc.trials > 1) {
            const armsim::PickPlaceBatch batch = armsim::run_pick_place_trials(sc, sc.trials);
            // CSV carries the last trial's full series; stats go to stdout.
            const armsim::SimResult last = armsim::run_scenario(sc, sc.trials - 1);
            if (format != "svg") {
                std::ostringstream csv;
                armsim::write_csv(csv, last.series);
                write_file(out_path, csv.str());
            }
            if (format != "csv") emit_svg(out_path + ".svg", sc, last.series);
            const auto& st = batch.stats;
            std::printf("-- pick-and-place repeatability (%d trials) --\n", st.trials);
            std::printf("mean_deviation_m     %.6f\n", st.mean_norm);
            std::printf("mean_per_axis_m      %.6f %.6f %.6f\n", st.mean.x(), st.mean.y(),
                        st.mean.z());
            std::printf("std_per_axis_m       %.6f %.6f %.6f\n", st.std_dev.x(),
                        st.std_dev.y(), st.std_dev.z());
            std::printf("max_abs_per_axis_m   %.6f %.6f %.6f\n", st.max_abs.x(),
                        st.max_abs.y(), st.max_abs.z());
            return 0;
        }

        const armsim::SimResult res = armsim::run_scenario(sc);
        if (format != "svg") {
            std::ostringstream csv;
            armsim::write_csv(csv, res.series);
            write_file(out_path, csv.str());
        }
        if (format != "csv") emit_svg(out_path + ".svg", sc, res.series);
        print_metrics(sc, res.metrics);
        return 0;
    } catch (const armsim::UnstableSimulationError& e) {
        std::fprintf(stderr, "unstable simulation: %s\n", e.what());
        return 5;
    } catch (const armsim::UnreachableError& e) {
        std::fprintf(stderr, "unreachable: %s\n", e.what());
        return 4;
    } catch (const armsim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
