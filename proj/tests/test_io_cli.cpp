#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "flowsched/cli.hpp"
#include "flowsched/io.hpp"

using namespace flowsched;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("flowsched_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FLOWSCHED_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("full-precision formatting survives a round trip") {
    for (double v : {0.1, 1.0 / 3.0, 2.2250738585072014e-308, 12345.678901234567}) {
        const double back = std::stod(format_full(v));
        CHECK(back == v);
    }
}

TEST_CASE("field CSV round trip") {
    const SpectralField field = constant_field(0.25, -1.0, 2.0, 7);
    const SpectralField back = field_from_csv(field_to_csv(field));
    REQUIRE(back.size() == field.size());
    for (Eigen::Index i = 0; i < field.size(); ++i) {
        CHECK(back.grid()(i) == field.grid()(i));
        CHECK(back.f()(i) == field.f()(i));
        CHECK(back.weights()(i) == field.weights()(i));
    }
    CHECK_THROWS(field_from_csv("bad,header\n1,2\n"));
}

TEST_CASE("atomic writes leave no temp files") {
    const fs::path dir = fresh_dir("atomic");
    write_file_atomic(dir / "a.txt", "hello\n");
    CHECK(slurp(dir / "a.txt") == "hello\n");
    CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
}

TEST_CASE("bounds JSON round trip") {
    const SpectralBounds b(1.25, -0.4);
    const SpectralBounds back = bounds_from_json(to_json(b));
    CHECK(back.f_star == b.f_star);
    CHECK(back.g_star == b.g_star);
}

TEST_CASE("schedule command is deterministic") {
    const fs::path dir1 = fresh_dir("sched1");
    const fs::path dir2 = fresh_dir("sched2");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json{{"f_star", 1.0}, {"g_star", -0.5}};
    cfg.grid = 101;
    cfg.out_dir = dir1;
    cli::run_schedule(cfg);
    cfg.out_dir = dir2;
    cli::run_schedule(cfg);
    CHECK(slurp(dir1 / "schedule.json") == slurp(dir2 / "schedule.json"));
    CHECK(slurp(dir1 / "schedule_curve.csv") == slurp(dir2 / "schedule_curve.csv"));
    CHECK(slurp(dir1 / "schedule_curve.csv").substr(0, 21) == "t,tau,tau_dot,tau_ddo");
}

TEST_CASE("schedule JSON written by the command reloads equivalently") {
    const fs::path dir = fresh_dir("roundtrip");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json{{"theta1", 1.0}, {"theta2", 0.1}};
    cfg.out_dir = dir;
    cli::run_schedule(cfg);
    std::ifstream in(dir / "schedule.json");
    const auto j = nlohmann::json::parse(in);
    const Schedule back = schedule_from_json(j);
    const Schedule orig = optimal_schedule(SpectralBounds(-0.9, -0.9));
    double sup = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = double(i) / 1000.0;
        sup = std::max(sup, std::abs(back.eval(t) - orig.eval(t)));
    }
    CHECK(sup < 1e-12);
}

TEST_CASE("config validation errors") {
    cli::RunConfig cfg;
    cfg.params = nlohmann::json{{"f_star", 1.0}};  // g_star missing
    CHECK_THROWS_AS(cli::run_schedule(cfg), cli::ConfigError);
    cfg.params = nlohmann::json{{"f_star", 1.0}, {"g_star", -2.0}};
    CHECK_THROWS_AS(cli::run_schedule(cfg), cli::ConfigError);
    cfg.params = nlohmann::json{{"f_star", 1.0}, {"g_star", -0.5}};
    cfg.format = "xml";
    CHECK_THROWS_AS(cli::run_schedule(cfg), cli::ConfigError);
}

TEST_CASE("binary exit codes") {
    const fs::path dir = fresh_dir("exitcodes");
    CHECK(run_cli("schedule --f-star 1 --g-star -0.5 --out " + (dir / "ok").string()) == 0);
    // config error: missing bounds
    CHECK(run_cli("schedule --out " + (dir / "c1").string()) == 2);
    // config error: malformed config file
    {
        std::ofstream bad(dir / "bad.json");
        bad << "{ not json";
    }
    CHECK(run_cli("schedule --config " + (dir / "bad.json").string()) == 2);
    // domain error past configuration: trivial transport in lp
    {
        std::ofstream cfg(dir / "lp_trivial.json");
        cfg << R"({"map":{"kind":"affine","slope":1.0},"omega":[-1,1],"n_field":32,"p":[1]})";
    }
    CHECK(run_cli("lp --config " + (dir / "lp_trivial.json").string() + " --out " +
                  (dir / "c2").string()) == 3);
    CHECK(run_cli("reproduce nosuchfig --out " + (dir / "c3").string()) == 2);
}

TEST_CASE("json curve format") {
    const fs::path dir = fresh_dir("jsonfmt");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json{{"f_star", 1.0}, {"g_star", -0.5}};
    cfg.out_dir = dir;
    cfg.format = "json";
    cfg.grid = 33;
    cli::run_schedule(cfg);
    const auto curve = nlohmann::json::parse(slurp(dir / "schedule_curve.json"));
    REQUIRE(curve.at("t").size() == 33);
    CHECK(curve.at("tau").back().get<double>() == doctest::Approx(1.0));
    CHECK_FALSE(fs::exists(dir / "schedule_curve.csv"));
}

TEST_CASE("lp command writes per-p solutions and the convergence table") {
    const fs::path dir = fresh_dir("lp");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json::parse(
        R"({"map":{"kind":"affine","slope":0.5},"omega":[-2,2],"n_field":33,"p":[1,8]})");
    cfg.out_dir = dir;
    cfg.grid = 128;
    cli::run_lp(cfg);
    const auto sol = nlohmann::json::parse(slurp(dir / "lp_p8.json"));
    CHECK(sol.at("kind") == "tabulated");
    CHECK(sol.at("p") == 8);
    CHECK(sol.at("residual_sup").get<double>() < 1e-6);
    const std::string table = slurp(dir / "lp_convergence.csv");
    CHECK(table.rfind("p,l2_distance_to_optimal,z_p,residual_sup\n", 0) == 0);
    // constant field: the relaxed schedules coincide with the closed form
    std::istringstream rows(table.substr(table.find('\n') + 1));
    std::string line;
    while (std::getline(rows, line)) {
        const auto comma = line.find(',');
        const double dist = std::stod(line.substr(comma + 1));
        CHECK(dist < 1e-7);
    }
}

TEST_CASE("fig4 reproduction: peaked trivial curve, flat optimal curve") {
    const fs::path dir = fresh_dir("fig4");
    REQUIRE(run_cli("reproduce fig4 --out " + dir.string()) == 0);
    auto ratio_of = [&](const fs::path& p) {
        std::istringstream in(slurp(p));
        std::string line;
        std::getline(in, line);  // header
        double lo = 1e300, hi = -1e300;
        while (std::getline(in, line)) {
            const double v = std::stod(line.substr(line.find(',') + 1));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    CHECK(ratio_of(dir / "lipschitz_trivial.csv") > 10.0);
    CHECK(ratio_of(dir / "lipschitz_optimal.csv") < 1.0 + 1e-4);
}

TEST_CASE("gaussian_table reproduction") {
    const fs::path dir = fresh_dir("gtable");
    REQUIRE(run_cli("reproduce gaussian_table --out " + dir.string()) == 0);
    const std::string table = slurp(dir / "gaussian_table.csv");
    CHECK(table.rfind("r,lambda_trivial,lambda_optimal,ratio\n", 0) == 0);
    // rows for every configured ratio
    CHECK(std::count(table.begin(), table.end(), '\n') == 7);
}

TEST_CASE("lipschitz command emits report and curves") {
    const fs::path dir = fresh_dir("lip");
    write_file_atomic(dir / "user_schedule.json", to_json(trivial_schedule()).dump());
    cli::RunConfig cfg;
    cfg.params = nlohmann::json{{"f_star", 1.0},
                                {"g_star", -0.5},
                                {"schedule", (dir / "user_schedule.json").string()}};
    cfg.out_dir = dir;
    cfg.grid = 257;
    cli::run_lipschitz(cfg);
    const auto rep = nlohmann::json::parse(slurp(dir / "lipschitz_report.json"));
    CHECK(rep.at("lambda_trivial").get<double>() == doctest::Approx(1.0));
    CHECK(rep.at("lambda_optimal").get<double>() == doctest::Approx(std::log(2.25)));
    CHECK(rep.at("lambda_of_input").get<double>() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(slurp(dir / "lipschitz_trivial.csv").rfind("t,lipschitz\n", 0) == 0);
    CHECK(slurp(dir / "lipschitz_optimal.csv").rfind("t,lipschitz\n", 0) == 0);
}

TEST_CASE("flow command emits trajectories and the error table") {
    const fs::path dir = fresh_dir("flow");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json::parse(R"({
        "map": {"kind": "gaussian", "mu1": 0.0, "theta1": 1.0, "mu2": 0.0, "theta2": 0.1},
        "omega": [-3.0, 3.0], "n_starts": 5, "n_field": 64, "euler_steps": [16, 32]
    })");
    cfg.out_dir = dir;
    cfg.grid = 51;
    cli::run_flow(cfg);
    const std::string traj = slurp(dir / "trajectories_trivial.csv");
    CHECK(traj.rfind("x0,t,x\n", 0) == 0);
    CHECK(std::count(traj.begin(), traj.end(), '\n') == 1 + 5 * 51);
    const std::string err = slurp(dir / "euler_error.csv");
    CHECK(err.rfind("h,sup_error,bound\n", 0) == 0);
    CHECK(std::count(err.begin(), err.end(), '\n') == 3);
}

TEST_CASE("flow command accepts an explicit start list") {
    const fs::path dir = fresh_dir("flow_starts");
    cli::RunConfig cfg;
    cfg.params = nlohmann::json::parse(R"({
        "map": {"kind": "gaussian", "mu1": 0.0, "theta1": 1.0, "mu2": 0.0, "theta2": 2.0},
        "omega": [-2.0, 2.0], "starts": [-1.0, 0.25, 1.5], "n_field": 33,
        "euler_steps": [8]
    })");
    cfg.out_dir = dir;
    cfg.grid = 21;
    cli::run_flow(cfg);
    const std::string traj = slurp(dir / "trajectories_optimal.csv");
    CHECK(std::count(traj.begin(), traj.end(), '\n') == 1 + 3 * 21);
}
