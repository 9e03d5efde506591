#include <clocale>
#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "flowsched/cli.hpp"

namespace {

using flowsched::cli::ConfigError;
using flowsched::cli::RunConfig;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    int grid = 0;
    std::uint64_t seed = 0;
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "output format for curves")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--grid", flags.grid, "grid size override");
    cmd->add_option("--seed", flags.seed, "seed for randomized sweeps");
}

RunConfig assemble(const CommonFlags& flags, const nlohmann::json& flag_params) {
    RunConfig cfg;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ConfigError("cannot open config file: " + flags.config_path);
        try {
            cfg.params = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid JSON in " + flags.config_path + ": " + e.what());
        }
    }
    // flags win over config-file values
    for (const auto& [key, value] : flag_params.items()) cfg.params[key] = value;
    if (!flags.out_dir.empty())
        cfg.out_dir = flags.out_dir;
    else if (cfg.params.contains("out"))
        cfg.out_dir = cfg.params.at("out").get<std::string>();
    if (!flags.format.empty())
        cfg.format = flags.format;
    else if (cfg.params.contains("format"))
        cfg.format = cfg.params.at("format").get<std::string>();
    if (flags.grid > 0)
        cfg.grid = flags.grid;
    else if (cfg.params.contains("grid"))
        cfg.grid = cfg.params.at("grid").get<int>();
    cfg.seed = flags.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"Optimal time schedules for linear-interpolation transport flows"};
    app.require_subcommand(1);

    CommonFlags flags;
    nlohmann::json flag_params;

    double f_star = 0, g_star = 0, alpha = 0, beta = 0, theta1 = 0, theta2 = 0;
    std::vector<CLI::Option*> of, og, oa, ob, ot1, ot2;
    auto attach_bounds = [&](CLI::App* cmd) {
        of.push_back(cmd->add_option("--f-star", f_star, "largest eigenvalue deviation"));
        og.push_back(cmd->add_option("--g-star", g_star, "smallest eigenvalue deviation"));
        oa.push_back(cmd->add_option("--alpha", alpha, "potential convexity lower bound"));
        ob.push_back(cmd->add_option("--beta", beta, "potential smoothness upper bound"));
        ot1.push_back(cmd->add_option("--theta1", theta1, "source Gaussian std"));
        ot2.push_back(cmd->add_option("--theta2", theta2, "target Gaussian std"));
    };
    auto given = [](const std::vector<CLI::Option*>& opts) {
        for (const CLI::Option* o : opts)
            if (o->count() > 0) return true;
        return false;
    };

    auto* cmd_schedule = app.add_subcommand(
        "schedule", "closed-form optimal schedule and sampled curve");
    attach_common(cmd_schedule, flags);
    attach_bounds(cmd_schedule);

    auto* cmd_lp = app.add_subcommand("lp", "relaxed-objective schedules and convergence table");
    attach_common(cmd_lp, flags);
    std::vector<int> p_list;
    auto* op = cmd_lp->add_option("--p", p_list, "relaxation orders");

    auto* cmd_lipschitz =
        app.add_subcommand("lipschitz", "Lipschitz report and curves");
    attach_common(cmd_lipschitz, flags);
    attach_bounds(cmd_lipschitz);
    int perturbations = 0;
    auto* opert = cmd_lipschitz->add_option("--perturbations", perturbations,
                                            "random monotone schedules to sweep");

    auto* cmd_flow = app.add_subcommand("flow", "trajectories and Euler error table");
    attach_common(cmd_flow, flags);

    auto* cmd_reproduce =
        app.add_subcommand("reproduce", "run a bundled example configuration");
    attach_common(cmd_reproduce, flags);
    std::string figure_id;
    cmd_reproduce->add_option("figure", figure_id, "one of fig1 fig2 fig3 fig4 gaussian_table")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    }

    try {
        if (given(of)) flag_params["f_star"] = f_star;
        if (given(og)) flag_params["g_star"] = g_star;
        if (given(oa)) flag_params["alpha"] = alpha;
        if (given(ob)) flag_params["beta"] = beta;
        if (given(ot1)) flag_params["theta1"] = theta1;
        if (given(ot2)) flag_params["theta2"] = theta2;
        if (op->count()) flag_params["p"] = p_list;
        if (opert->count()) flag_params["perturbations"] = perturbations;

        RunConfig cfg = assemble(flags, flag_params);
        if (cmd_schedule->parsed()) flowsched::cli::run_schedule(cfg);
        if (cmd_lp->parsed()) flowsched::cli::run_lp(cfg);
        if (cmd_lipschitz->parsed()) flowsched::cli::run_lipschitz(cfg);
        if (cmd_flow->parsed()) flowsched::cli::run_flow(cfg);
        if (cmd_reproduce->parsed())
            flowsched::cli::run_reproduce(figure_id, cfg, flags.config_path);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: domain: %s\n", e.what());
        return 3;
    }
}
