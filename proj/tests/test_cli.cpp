#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the CLI with the given arguments; captures stdout+stderr.
RunResult run_cli(const std::string& args) {
    const std::string log = std::string(ARMSIM_TEST_TMP) + "/cli_out.txt";
    const std::string cmd = std::string(ARMSIM_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(log);
    return r;
}

std::string scenario(const std::string& name) {
    return std::string(ARMSIM_REPO_DIR) + "/scenarios/" + name;
}

std::string tmp_path(const std::string& name) {
    return std::string(ARMSIM_TEST_TMP) + "/" + name;
}

} // namespace

TEST_CASE("fk at the home pose prints the documented position") {
    const RunResult r = run_cli("fk 0 0 0 0 0 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("position_m 0.450000 -0.080000 0.100000") != std::string::npos);
}

TEST_CASE("fk honours an explicit arm file") {
    const std::string arm = std::string(ARMSIM_REPO_DIR) + "/configs/default_arm.cfg";
    const RunResult r = run_cli("fk --arm " + arm + " 0 0 0 0 0 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("position_m 0.450000 -0.080000 0.100000") != std::string::npos);
}

TEST_CASE("ik converges on a reachable target") {
    const RunResult r = run_cli("ik 0.35 0.05 0.15");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("converged  yes") != std::string::npos);
}

TEST_CASE("ik reports an unreachable target with exit code 4") {
    const RunResult r = run_cli("ik 1.0 0.0 0.0");
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("unreachable") != std::string::npos);
}

TEST_CASE("simulate runs the shipped step scenario and writes the CSV") {
    const std::string out = tmp_path("step.csv");
    const RunResult r =
        run_cli("simulate --scenario " + scenario("step_joint2.cfg") + " --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("overshoot_pct") != std::string::npos);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("t_s,q_des_rad_1", 0) == 0);
    CHECK(csv.find("ee_z_m") != std::string::npos);
}

TEST_CASE("simulate exits 2 on a missing scenario file") {
    const RunResult r = run_cli("simulate --scenario /nonexistent.cfg");
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate exits 2 on an invalid override") {
    const RunResult r = run_cli("simulate --scenario " + scenario("step_joint2.cfg") +
                                " --set task.dt=0.5 --out " + tmp_path("bad.csv"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate exits 4 when the scenario target is out of reach") {
    const RunResult r = run_cli("simulate --scenario " + scenario("pick_place.cfg") +
                                " --set task.target_m=\"2.0, 0.0, 0.0\" --out " +
                                tmp_path("far.csv"));
    CHECK(r.exit_code == 4);
}

TEST_CASE("--set overrides a scenario value") {
    const std::string out = tmp_path("short.csv");
    const RunResult r = run_cli("simulate --scenario " + scenario("step_joint2.cfg") +
                                " --set task.duration=0.5 --out " + out);
    CHECK(r.exit_code == 0);
    // 0.5 s at 1 ms -> 501 data rows + header
    const std::string csv = slurp(out);
    const auto rows = static_cast<long>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == 502);
}

TEST_CASE("repeated runs of a noisy scenario produce byte-identical CSVs") {
    const std::string a = tmp_path("det_a.csv"), b = tmp_path("det_b.csv");
    const std::string args = "simulate --scenario " + scenario("pick_place.cfg") +
                             " --set task.trials=3 --out ";
    CHECK(run_cli(args + a).exit_code == 0);
    CHECK(run_cli(args + b).exit_code == 0);
    const std::string ca = slurp(a), cb = slurp(b);
    CHECK(!ca.empty());
    CHECK(ca == cb);
}

TEST_CASE("--seed changes the noise stream") {
    const std::string a = tmp_path("seed_a.csv"), b = tmp_path("seed_b.csv");
    const std::string args = "simulate --scenario " + scenario("step_joint2.cfg") +
                             " --set noise.std_deg=0.3 --set noise.seed=1 "
                             "--set task.duration=0.5 ";
    CHECK(run_cli(args + "--out " + a).exit_code == 0);
    CHECK(run_cli(args + "--seed 77 --out " + b).exit_code == 0);
    CHECK(slurp(a) != slurp(b));
}

TEST_CASE("svg output is written next to the csv") {
    const std::string out = tmp_path("plot.csv");
    const RunResult r = run_cli("simulate --scenario " + scenario("step_joint2.cfg") +
                                " --set task.duration=0.5 --format both --out " + out);
    CHECK(r.exit_code == 0);
    const std::string svg = slurp(out + ".svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("report prints the three controller rows") {
    const RunResult r = run_cli("report --scenario " + scenario("table1.cfg") +
                                " --set task.trials=2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("open_loop") != std::string::npos);
    CHECK(r.out.find("pid") != std::string::npos);
    CHECK(r.out.find("hybrid") != std::string::npos);
}
