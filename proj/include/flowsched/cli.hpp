#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace flowsched::cli {

// Invalid or missing configuration; mapped to exit code 2 by the driver.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    nlohmann::json params;  // config file contents merged with flag overrides
    std::filesystem::path out_dir = "out";
    std::string format = "csv";  // csv | json
    int grid = 0;                // 0 -> per-command default
    std::uint64_t seed = 0;
};

// Commands assemble every output in memory first and only then write, each
// file atomically, so failed runs leave no partial outputs. Domain errors
// thrown past config validation map to exit code 3.
void run_schedule(const RunConfig& cfg);
void run_lp(const RunConfig& cfg);
void run_lipschitz(const RunConfig& cfg);
void run_flow(const RunConfig& cfg);
void run_reproduce(const std::string& figure_id, RunConfig cfg,
                   const std::filesystem::path& explicit_config);

// Dispatch on cfg.params["command"].
void run_command(const std::string& command, const RunConfig& cfg);

}  // namespace flowsched::cli
