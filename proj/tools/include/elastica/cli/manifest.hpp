#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace elastica::cli {

struct RunManifest {
    std::string tool_version;
    std::string config_digest;  // sha256 of the resolved config file, lowercase hex
    std::uint64_t master_seed = 0;
    std::string started_at;
    std::string finished_at;
    std::string subcommand;
};

std::string sha256_hex(std::string_view bytes);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string iso8601_utc(std::chrono::system_clock::time_point t);

nlohmann::json to_json(const RunManifest& m);

std::string tool_version();

}  // namespace elastica::cli
