#include "flowsched/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flowsched {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

json to_json(const SpectralBounds& b) {
    return json{{"f_star", b.f_star}, {"g_star", b.g_star}};
}

SpectralBounds bounds_from_json(const json& j) {
    return SpectralBounds(j.at("f_star").get<double>(), j.at("g_star").get<double>());
}

json to_json(const Schedule& s) {
    json j;
    j["kind"] = to_string(s.kind());
    switch (s.kind()) {
        case ScheduleKind::Trivial:
            if (s.trivial_transport_warning()) j["trivial_transport_warning"] = true;
            break;
        case ScheduleKind::SimpleF:
        case ScheduleKind::SimpleG:
            j["f_star"] = s.f_star();
            j["g_star"] = s.g_star();
            break;
        case ScheduleKind::Piecewise:
            j["f_star"] = s.f_star();
            j["g_star"] = s.g_star();
            j["t0"] = s.t0();
            j["tau0"] = s.tau0();
            break;
        case ScheduleKind::Tabulated: {
            const Eigen::ArrayXd t = s.table_t();
            const Eigen::ArrayXd tau = s.table_tau();
            const Eigen::ArrayXd td = s.table_dtau_dt();
            j["t"] = std::vector<double>(t.data(), t.data() + t.size());
            j["tau"] = std::vector<double>(tau.data(), tau.data() + tau.size());
            j["tau_dot"] = std::vector<double>(td.data(), td.data() + td.size());
            break;
        }
    }
    return j;
}

Schedule schedule_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trivial")
        return Schedule::make_trivial(j.value("trivial_transport_warning", false));
    if (kind == "simple_f")
        return Schedule::make_simple_f(j.at("f_star").get<double>(),
                                       j.at("g_star").get<double>());
    if (kind == "simple_g")
        return Schedule::make_simple_g(j.at("f_star").get<double>(),
                                       j.at("g_star").get<double>());
    if (kind == "piecewise") {
        Schedule s = Schedule::make_piecewise(j.at("f_star").get<double>(),
                                              j.at("g_star").get<double>());
        if (j.contains("t0") && std::abs(j.at("t0").get<double>() - s.t0()) > 1e-6)
            throw std::domain_error("piecewise schedule t0 inconsistent with bounds");
        return s;
    }
    if (kind == "tabulated") {
        const auto tv = j.at("t").get<std::vector<double>>();
        const auto tauv = j.at("tau").get<std::vector<double>>();
        Eigen::ArrayXd t = Eigen::Map<const Eigen::ArrayXd>(tv.data(), Eigen::Index(tv.size()));
        Eigen::ArrayXd tau =
            Eigen::Map<const Eigen::ArrayXd>(tauv.data(), Eigen::Index(tauv.size()));
        if (j.contains("tau_dot")) {
            const auto dv = j.at("tau_dot").get<std::vector<double>>();
            Eigen::ArrayXd d =
                Eigen::Map<const Eigen::ArrayXd>(dv.data(), Eigen::Index(dv.size()));
            return Schedule::make_tabulated(t, tau, d);
        }
        return Schedule::make_tabulated(t, tau);
    }
    throw std::domain_error("unknown schedule kind: " + kind);
}

json to_json(const LpSolution& sol) {
    json j = to_json(sol.schedule);
    j["p"] = sol.p;
    j["z_p"] = sol.z_p;
    j["residual_sup"] = sol.residual_sup;
    return j;
}

json to_json(const LipschitzReport& rep) {
    json j{{"lambda_trivial", rep.lambda_trivial},
           {"lambda_optimal", rep.lambda_optimal},
           {"ratio", rep.ratio}};
    if (rep.lambda_of_input) j["lambda_of_input"] = *rep.lambda_of_input;
    if (!rep.curve.empty()) {
        json curve = json::array();
        for (const auto& [t, v] : rep.curve) curve.push_back(json::array({t, v}));
        j["curve"] = curve;
    }
    return j;
}

GaussianMixture mixture_from_json(const json& j) {
    std::vector<MixtureComponent> comps;
    for (const auto& c : j.at("components")) {
        comps.push_back(MixtureComponent{c.at("weight").get<double>(),
                                         c.at("mean").get<double>(),
                                         c.at("std").get<double>()});
    }
    return GaussianMixture(std::move(comps));
}

json to_json(const GaussianMixture& mixture) {
    json comps = json::array();
    for (const auto& c : mixture.components())
        comps.push_back(json{{"weight", c.weight}, {"mean", c.mean}, {"std", c.stddev}});
    return json{{"components", comps}};
}

std::string field_to_csv(const SpectralField& field) {
    std::ostringstream out;
    out << "s,f,g,weight\n";
    for (Eigen::Index i = 0; i < field.size(); ++i) {
        out << format_full(field.grid()(i)) << ',' << format_full(field.f()(i)) << ','
            << format_full(field.g()(i)) << ',' << format_full(field.weights()(i)) << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           const std::string& expected_header,
                                           size_t n_cols) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw std::runtime_error("unexpected CSV header: " + line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != n_cols)
            throw std::runtime_error("bad CSV row: " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

SpectralField field_from_csv(const std::string& text) {
    const auto rows = parse_csv(text, "s,f,g,weight", 4);
    const Eigen::Index n = Eigen::Index(rows.size());
    Eigen::ArrayXd s(n), f(n), g(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i) = rows[size_t(i)][0];
        f(i) = rows[size_t(i)][1];
        g(i) = rows[size_t(i)][2];
        w(i) = rows[size_t(i)][3];
    }
    return SpectralField(std::move(s), std::move(f), std::move(g), std::move(w));
}

std::string schedule_curve_csv(const Schedule& schedule, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("curve needs n_samples >= 2");
    std::ostringstream out;
    out << "t,tau,tau_dot,tau_ddot\n";
    for (int i = 0; i < n_samples; ++i) {
        const double t = double(i) / double(n_samples - 1);
        out << format_full(t) << ',' << format_full(schedule.eval(t)) << ','
            << format_full(schedule.deriv(t)) << ',' << format_full(schedule.second_deriv(t))
            << '\n';
    }
    return out.str();
}

std::string lipschitz_curve_csv(const std::vector<std::pair<double, double>>& curve) {
    std::ostringstream out;
    out << "t,lipschitz\n";
    for (const auto& [t, v] : curve) out << format_full(t) << ',' << format_full(v) << '\n';
    return out.str();
}

std::string trajectories_csv(const std::vector<FlowTrajectory>& trajectories) {
    std::ostringstream out;
    out << "x0,t,x\n";
    for (const auto& traj : trajectories) {
        for (Eigen::Index k = 0; k < traj.times.size(); ++k)
            out << format_full(traj.x0) << ',' << format_full(traj.times(k)) << ','
                << format_full(traj.positions(k)) << '\n';
    }
    return out.str();
}

}  // namespace flowsched
