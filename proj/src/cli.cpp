#include "flowsched/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "flowsched/io.hpp"
#include "flowsched/random.hpp"

namespace flowsched::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

// All outputs of a command are staged here and written together at the end.
class OutputBundle {
public:
    explicit OutputBundle(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string contents) {
        files_.emplace_back(name, std::move(contents));
    }

    void add_json(const std::string& name, const json& j) {
        add(name, j.dump(2) + "\n");
    }

    void flush() const {
        for (const auto& [name, contents] : files_)
            write_file_atomic(dir_ / name, contents);
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError("missing numeric config key: " + key);
    return j.at(key).get<double>();
}

SpectralBounds bounds_of(const json& cfg) {
    try {
        if (cfg.contains("f_star") || cfg.contains("g_star"))
            return SpectralBounds(require_number(cfg, "f_star"), require_number(cfg, "g_star"));
        if (cfg.contains("alpha") || cfg.contains("beta"))
            return bounds_from_potential(require_number(cfg, "alpha"),
                                         require_number(cfg, "beta"));
        if (cfg.contains("theta1") || cfg.contains("theta2")) {
            const double t1 = require_number(cfg, "theta1");
            const double t2 = require_number(cfg, "theta2");
            if (!(t1 > 0.0 && t2 > 0.0))
                throw ConfigError("theta1 and theta2 must be positive");
            const double r = t2 / t1;
            return SpectralBounds(r - 1.0, r - 1.0);
        }
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid bounds: ") + e.what());
    }
    throw ConfigError("no bounds given (expected f_star/g_star, alpha/beta or theta1/theta2)");
}

TransportMap1D map_of(const json& cfg) {
    if (!cfg.contains("map")) throw ConfigError("missing 'map' section");
    const json& m = cfg.at("map");
    const std::string kind = m.value("kind", "");
    try {
        if (kind == "gaussian") {
            return gaussian_map(m.value("mu1", 0.0), require_number(m, "theta1"),
                                m.value("mu2", 0.0), require_number(m, "theta2"));
        }
        if (kind == "gmm") {
            return gmm_map(mixture_from_json(m.at("source")), mixture_from_json(m.at("target")),
                           m.value("delta", 1e-4),
                           Eigen::Index(m.value("n_cache", 4096)));
        }
        if (kind == "affine") {
            return TransportMap1D::affine(require_number(m, "slope"), m.value("intercept", 0.0));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid map section: ") + e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid map section: ") + e.what());
    }
    throw ConfigError("map.kind must be one of gaussian, gmm, affine");
}

std::pair<double, double> omega_of(const json& cfg, const TransportMap1D& map) {
    if (cfg.contains("omega")) {
        const auto& om = cfg.at("omega");
        if (!om.is_array() || om.size() != 2)
            throw ConfigError("omega must be [lo, hi]");
        return {om[0].get<double>(), om[1].get<double>()};
    }
    if (map.bounded()) return {map.domain_lo(), map.domain_hi()};
    throw ConfigError("omega required for maps with unbounded domain");
}

SpectralField field_of(const json& cfg) {
    if (cfg.contains("field_csv")) {
        const fs::path path = cfg.at("field_csv").get<std::string>();
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open field CSV: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return field_from_csv(buf.str());
    }
    if (cfg.contains("map")) {
        const TransportMap1D map = map_of(cfg);
        const auto [lo, hi] = omega_of(cfg, map);
        const Eigen::Index n = Eigen::Index(cfg.value("n_field", 1024));
        return field_from_map1d(map, lo, hi, n);
    }
    throw ConfigError("no field given (expected 'map' or 'field_csv')");
}

json curve_json(const std::vector<std::pair<double, double>>& curve) {
    std::vector<double> t, v;
    t.reserve(curve.size());
    v.reserve(curve.size());
    for (const auto& [ti, vi] : curve) {
        t.push_back(ti);
        v.push_back(vi);
    }
    return json{{"t", t}, {"lipschitz", v}};
}

json schedule_curve_json(const Schedule& s, int n) {
    std::vector<double> t, tau, td, tdd;
    for (int i = 0; i < n; ++i) {
        const double ti = double(i) / double(n - 1);
        t.push_back(ti);
        tau.push_back(s.eval(ti));
        td.push_back(s.deriv(ti));
        tdd.push_back(s.second_deriv(ti));
    }
    return json{{"t", t}, {"tau", tau}, {"tau_dot", td}, {"tau_ddot", tdd}};
}

void emit_schedule_curve(OutputBundle& out, const std::string& stem, const Schedule& s,
                         int n, const std::string& format) {
    if (format == "json")
        out.add_json(stem + ".json", schedule_curve_json(s, n));
    else
        out.add(stem + ".csv", schedule_curve_csv(s, n));
}

void emit_lipschitz_curve(OutputBundle& out, const std::string& stem,
                          const std::vector<std::pair<double, double>>& curve,
                          const std::string& format) {
    if (format == "json")
        out.add_json(stem + ".json", curve_json(curve));
    else
        out.add(stem + ".csv", lipschitz_curve_csv(curve));
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json")
        throw ConfigError("format must be csv or json");
}

}  // namespace

void run_schedule(const RunConfig& cfg) {
    check_format(cfg.format);
    const SpectralBounds bounds = bounds_of(cfg.params);
    const int n = cfg.grid > 0 ? cfg.grid : 1001;
    const Schedule sched = optimal_schedule(bounds);

    OutputBundle out(cfg.out_dir);
    json meta = to_json(sched);
    meta["bounds"] = to_json(bounds);
    out.add_json("schedule.json", meta);
    emit_schedule_curve(out, "schedule_curve", sched, n, cfg.format);
    out.flush();
}

void run_lp(const RunConfig& cfg) {
    check_format(cfg.format);
    const SpectralField field = field_of(cfg.params);
    std::vector<int> p_list = cfg.params.value("p", std::vector<int>{1, 2, 4, 8, 16, 32, 64});
    for (int p : p_list)
        if (p < 1) throw ConfigError("p values must be positive");
    const Eigen::Index n_tau = cfg.grid > 0 ? cfg.grid : 2048;

    const SpectralBounds bounds = bounds_from_field(field);
    const Schedule tau_inf = optimal_schedule(bounds);

    OutputBundle out(cfg.out_dir);
    std::ostringstream table;
    table << "p,l2_distance_to_optimal,z_p,residual_sup\n";
    for (int p : p_list) {
        const LpSolution sol = solve_lp(field, p, n_tau);
        out.add_json("lp_p" + std::to_string(p) + ".json", to_json(sol));
        table << p << ',' << format_full(l2_distance(sol.schedule, tau_inf)) << ','
              << format_full(sol.z_p) << ',' << format_full(sol.residual_sup) << '\n';
    }
    out.add("lp_convergence.csv", table.str());
    out.flush();
}

void run_lipschitz(const RunConfig& cfg) {
    check_format(cfg.format);
    const int n = cfg.grid > 0 ? cfg.grid : 4096;

    std::optional<SpectralField> field;
    SpectralBounds bounds(0.0, 0.0);
    if (cfg.params.contains("map") || cfg.params.contains("field_csv")) {
        field = field_of(cfg.params);
        bounds = bounds_from_field(*field);
    } else {
        bounds = bounds_of(cfg.params);
    }

    std::optional<Schedule> user;
    if (cfg.params.contains("schedule"))
        user = schedule_from_json(
            load_json_file(cfg.params.at("schedule").get<std::string>()));

    LipschitzReport rep =
        field ? report(*field, user ? &*user : nullptr, n)
              : report(bounds, user ? &*user : nullptr, n);

    const Schedule triv = trivial_schedule();
    const Schedule opt = optimal_schedule(bounds);
    const auto curve_triv = field ? lipschitz_curve(*field, triv, n)
                                  : lipschitz_curve(bounds, triv, n);
    const auto curve_opt = field ? lipschitz_curve(*field, opt, n)
                                 : lipschitz_curve(bounds, opt, n);

    json rj = to_json(rep);
    rj["bounds"] = to_json(bounds);
    const int n_pert = cfg.params.value("perturbations", 0);
    if (n_pert > 0) {
        SplitMix64 rng(cfg.seed);
        double lo = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_pert; ++i) {
            const Schedule pert = random_monotone_schedule(rng, 65, 0.4);
            const double lam = field ? lambda_of_schedule_field(*field, pert, n)
                                     : lambda_of_schedule(bounds, pert, n);
            lo = std::min(lo, lam);
        }
        rj["perturbation_min_lambda"] = lo;
        rj["perturbation_count"] = n_pert;
    }

    OutputBundle out(cfg.out_dir);
    out.add_json("lipschitz_report.json", rj);
    emit_lipschitz_curve(out, "lipschitz_trivial", curve_triv, cfg.format);
    emit_lipschitz_curve(out, "lipschitz_optimal", curve_opt, cfg.format);
    out.flush();
}

void run_flow(const RunConfig& cfg) {
    check_format(cfg.format);
    const TransportMap1D map = map_of(cfg.params);
    const auto [lo, hi] = omega_of(cfg.params, map);
    if (!(hi > lo)) throw ConfigError("omega must satisfy lo < hi");
    const Eigen::Index n_field = Eigen::Index(cfg.params.value("n_field", 1024));
    const int n_time = cfg.grid > 0 ? cfg.grid : 201;

    std::vector<double> starts;
    if (cfg.params.contains("starts")) {
        starts = cfg.params.at("starts").get<std::vector<double>>();
    } else {
        const int n_starts = cfg.params.value("n_starts", 9);
        if (n_starts < 1) throw ConfigError("n_starts must be positive");
        for (int i = 0; i < n_starts; ++i)
            starts.push_back(n_starts == 1
                                 ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * double(i) / double(n_starts - 1));
    }
    std::vector<int> euler_steps =
        cfg.params.value("euler_steps", std::vector<int>{32, 64, 128});

    const SpectralField field = field_from_map1d(map, lo, hi, n_field);
    const SpectralBounds bounds = bounds_from_field(field);
    const Schedule triv = trivial_schedule();
    const Schedule opt = optimal_schedule(bounds);
    const Eigen::ArrayXd times = Eigen::ArrayXd::LinSpaced(n_time, 0.0, 1.0);

    std::vector<FlowTrajectory> bundle_triv, bundle_opt;
    for (double x0 : starts) {
        bundle_triv.push_back(exact_flow(map, triv, x0, times));
        bundle_opt.push_back(exact_flow(map, opt, x0, times));
    }

    std::ostringstream err_table;
    err_table << "h,sup_error,bound\n";
    for (int n_steps : euler_steps) {
        if (n_steps < 1) throw ConfigError("euler_steps must be positive");
        const double h = 1.0 / double(n_steps);
        double sup_err = 0.0;
        for (double x0 : starts) {
            const FlowTrajectory traj = euler_flow(map, opt, x0, n_steps);
            sup_err = std::max(sup_err,
                               std::abs(traj.positions(traj.positions.size() - 1) - map(x0)));
        }
        err_table << format_full(h) << ',' << format_full(sup_err) << ','
                  << format_full(error_bound(bounds, map, opt, h, lo, hi)) << '\n';
    }

    OutputBundle out(cfg.out_dir);
    out.add("trajectories_trivial.csv", trajectories_csv(bundle_triv));
    out.add("trajectories_optimal.csv", trajectories_csv(bundle_opt));
    out.add("euler_error.csv", err_table.str());
    json meta = to_json(opt);
    meta["bounds"] = to_json(bounds);
    out.add_json("schedule.json", meta);
    out.flush();
}

namespace {

fs::path executable_dir() {
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (ec) return {};
    return exe.parent_path();
}

fs::path resolve_reproduce_config(const std::string& figure_id,
                                  const fs::path& explicit_config) {
    if (!explicit_config.empty()) return explicit_config;
    const std::string name = figure_id + ".json";
    std::vector<fs::path> candidates;
    if (const char* dir = std::getenv("FLOWSCHED_CONFIG_DIR"))
        candidates.push_back(fs::path(dir) / name);
    candidates.push_back(fs::path("configs") / name);
    if (const fs::path exe_dir = executable_dir(); !exe_dir.empty()) {
        candidates.push_back(exe_dir / "configs" / name);
        candidates.push_back(exe_dir / ".." / "configs" / name);
    }
    for (const auto& c : candidates)
        if (fs::exists(c)) return c;
    throw ConfigError("cannot locate bundled config " + name +
                      " (searched configs/ next to the working directory and binary)");
}

void run_reproduce_figure(const json& config, const RunConfig& base) {
    const std::string figure = config.value("figure", "");
    if (figure == "fig2") {
        // optimal schedule curves for the narrow-Gaussian and mixture setups
        const int n = base.grid > 0 ? base.grid : 1001;
        RunConfig part = base;
        part.grid = n;
        part.params = config.at("gaussian");
        part.out_dir = base.out_dir / "gaussian";
        run_schedule(part);

        const SpectralField field = field_of(config.at("gmm"));
        const Schedule sched = optimal_schedule(bounds_from_field(field));
        OutputBundle out(base.out_dir / "gmm");
        json meta = to_json(sched);
        meta["bounds"] = to_json(bounds_from_field(field));
        out.add_json("schedule.json", meta);
        emit_schedule_curve(out, "schedule_curve", sched, n, base.format);
        out.flush();
        return;
    }
    if (figure == "gaussian_table") {
        const auto ratios = config.at("r").get<std::vector<double>>();
        std::ostringstream table;
        table << "r,lambda_trivial,lambda_optimal,ratio\n";
        for (double r : ratios) {
            if (!(r > 0.0)) throw ConfigError("r values must be positive");
            const SpectralBounds b(r - 1.0, r - 1.0);
            const double lt = lambda_trivial_closed(b);
            const double lo = lambda_optimal_closed(b);
            table << format_full(r) << ',' << format_full(lt) << ',' << format_full(lo)
                  << ',' << format_full(lo > 0 ? lt / lo : 1.0) << '\n';
        }
        OutputBundle out(base.out_dir);
        out.add("gaussian_table.csv", table.str());
        out.flush();
        return;
    }
    throw ConfigError("unknown reproduce figure: " + figure);
}

}  // namespace

void run_reproduce(const std::string& figure_id, RunConfig cfg,
                   const fs::path& explicit_config) {
    static const std::vector<std::string> known = {"fig1", "fig2", "fig3", "fig4",
                                                   "gaussian_table"};
    if (std::find(known.begin(), known.end(), figure_id) == known.end())
        throw ConfigError("unknown figure id: " + figure_id);
    const fs::path path = resolve_reproduce_config(figure_id, explicit_config);
    const json config = load_json_file(path);
    if (cfg.out_dir == fs::path("out")) cfg.out_dir = fs::path("out") / figure_id;

    const std::string command = config.value("command", "");
    if (command == "reproduce") {
        run_reproduce_figure(config, cfg);
        return;
    }
    RunConfig sub = cfg;
    sub.params = config;
    run_command(command, sub);
}

void run_command(const std::string& command, const RunConfig& cfg) {
    if (command == "schedule") return run_schedule(cfg);
    if (command == "lp") return run_lp(cfg);
    if (command == "lipschitz") return run_lipschitz(cfg);
    if (command == "flow") return run_flow(cfg);
    throw ConfigError("unknown command: " + command);
}

}  // namespace flowsched::cli
