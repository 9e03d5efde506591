#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowsched/flow.hpp"
#include "flowsched/lipschitz.hpp"
#include "flowsched/schedule.hpp"
#include "flowsched/spectral.hpp"
#include "flowsched/variational.hpp"

namespace flowsched {

// 17 significant digits, '.' decimal, locale independent.
std::string format_full(double v);

// Write-to-temp-then-rename so interrupted runs never leave partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

nlohmann::json to_json(const SpectralBounds& bounds);
SpectralBounds bounds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LpSolution& sol);

nlohmann::json to_json(const LipschitzReport& rep);

GaussianMixture mixture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GaussianMixture& mixture);

// CSV codecs. Headers are fixed: fields use `s,f,g,weight`, schedule curves
// `t,tau,tau_dot,tau_ddot`, Lipschitz curves `t,lipschitz`, trajectory
// bundles `x0,t,x`.
std::string field_to_csv(const SpectralField& field);
SpectralField field_from_csv(const std::string& text);

std::string schedule_curve_csv(const Schedule& schedule, int n_samples);
std::string lipschitz_curve_csv(const std::vector<std::pair<double, double>>& curve);
std::string trajectories_csv(const std::vector<FlowTrajectory>& trajectories);

}  // namespace flowsched
