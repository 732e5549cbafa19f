#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "elastica/errors.hpp"
#include "elastica/experiments.hpp"
#include "elastica/types.hpp"

namespace elastica::cli {

/// A config problem, located at a key path and (when known) a line of the source.
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& key_path, const std::string& what);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& key_path() const noexcept { return key_path_; }

private:
    std::size_t line_;
    std::string key_path_;
};

enum class Simulator { Interacting, OuExact, OuEuler };

std::string_view to_string(Simulator s) noexcept;

struct Campaign {
    std::size_t n_replicates = 100;
    double eps = 0.1;
    std::vector<experiments::GridPoint> grid;
    bool store_noise = false;
};

struct RunConfig {
    SystemConfig system;
    Simulator simulator = Simulator::Interacting;
    Campaign campaign;
};

/// Strict parse: unknown keys, wrong types and inconsistent values are errors.
/// Missing optional fields get their defaults (sigma 1, stationary initial
/// variances, t_final 1, the h <= 0.01 / theta_max step rule, seed 0).
RunConfig parse_config_text(std::string_view text, const std::string& source_name = "<config>");

RunConfig parse_config(const std::filesystem::path& path);

/// Every field with its resolved value. Parsing the dump gives back the same config.
nlohmann::json resolved_json(const RunConfig& config);

}  // namespace elastica::cli
