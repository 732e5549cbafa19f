#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "elastica/experiments.hpp"
#include "elastica/types.hpp"

namespace elastica::cli {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Header `step,time,particle,coord,value`, one row per scalar, in storage order.
void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle);

/// Same schema for the noise increments; `step` is the grid index the increment starts from.
void write_noise_csv(std::ostream& out, const TrajectoryBundle& bundle);

/// Reads a trajectory written by write_trajectory_csv. `config` supplies the
/// shape and must match the file exactly (row count and indices); throws
/// ValidationError otherwise.
TrajectoryBundle read_trajectory_csv(std::istream& in, const SystemConfig& config);

TrajectoryBundle read_trajectory_file(const std::filesystem::path& path, const SystemConfig& config);

void write_rate_table_csv(std::ostream& out, const experiments::RateTable& table);

/// gnuplot script plotting median and 90% error against N t on log-log axes,
/// with the bound and the fitted line overlaid.
std::string rate_study_gnuplot(const std::string& csv_name, const experiments::RateTable& table);

/// Writes `content` to `path`, replacing any existing file.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace elastica::cli
