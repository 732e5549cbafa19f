#include "elastica/cli/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "elastica/errors.hpp"

namespace elastica::cli {

namespace {

constexpr std::string_view kTrajectoryHeader = "step,time,particle,coord,value";

void write_rows(std::ostream& out, const TrajectoryBundle& bundle, std::span<const double> values, std::size_t steps) {
    const std::size_t n = bundle.n_particles();
    const std::size_t d = bundle.dim();
    const auto times = bundle.times();
    out << kTrajectoryHeader << '\n';
    for (std::size_t k = 0; k < steps; ++k) {
        const std::string t = format_double(times[k]);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out << k << ',' << t << ',' << i << ',' << j << ',' << format_double(values[(k * n + i) * d + j])
                    << '\n';
            }
        }
    }
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ValidationError("trajectory CSV line " + std::to_string(line) + ": bad " + name + " '" +
                              std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) {
        throw Error("could not format a double");
    }
    return std::string(buf.data(), ptr);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle) {
    write_rows(out, bundle, bundle.states(), bundle.n_times());
}

void write_noise_csv(std::ostream& out, const TrajectoryBundle& bundle) {
    write_rows(out, bundle, bundle.noise_increments(), bundle.n_steps());
}

TrajectoryBundle read_trajectory_csv(std::istream& in, const SystemConfig& config) {
    config.validate();
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    const std::size_t rows = (config.n_steps + 1) * n * d;
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        throw ValidationError("trajectory CSV must start with the header '" + std::string(kTrajectoryHeader) + "'");
    }
    std::vector<double> states(rows);
    std::size_t row = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (row == rows) {
            throw ValidationError("trajectory CSV has more rows than the config's " + std::to_string(rows));
        }
        std::array<std::string_view, 5> fields;
        std::string_view rest(line);
        for (std::size_t f = 0; f < 5; ++f) {
            const auto comma = rest.find(',');
            if ((f < 4) == (comma == std::string_view::npos)) {
                throw ValidationError("trajectory CSV line " + std::to_string(line_no) + ": expected 5 fields");
            }
            fields[f] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        const auto step = parse_field<std::size_t>(fields[0], line_no, "step");
        const auto particle = parse_field<std::size_t>(fields[2], line_no, "particle");
        const auto coord = parse_field<std::size_t>(fields[3], line_no, "coord");
        const std::size_t expected_step = row / (n * d);
        const std::size_t expected_particle = (row / d) % n;
        const std::size_t expected_coord = row % d;
        if (step != expected_step || particle != expected_particle || coord != expected_coord) {
            throw ValidationError("trajectory CSV line " + std::to_string(line_no) + ": expected step " +
                                  std::to_string(expected_step) + ", particle " + std::to_string(expected_particle) +
                                  ", coord " + std::to_string(expected_coord));
        }
        (void)parse_field<double>(fields[1], line_no, "time");
        states[row] = parse_field<double>(fields[4], line_no, "value");
        ++row;
    }
    if (row != rows) {
        throw ValidationError("trajectory CSV has " + std::to_string(row) + " rows, the config implies " +
                              std::to_string(rows));
    }
    return TrajectoryBundle(config, std::move(states));
}

TrajectoryBundle read_trajectory_file(const std::filesystem::path& path, const SystemConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    return read_trajectory_csv(in, config);
}

void write_rate_table_csv(std::ostream& out, const experiments::RateTable& table) {
    out << "n,t,nt,n_replicates,median_error,q90_error,mean_error,theory_bound,theorem_applies\n";
    for (const auto& r : table.rows) {
        out << r.n << ',' << format_double(r.t) << ',' << format_double(r.nt) << ',' << r.n_replicates << ','
            << format_double(r.median_error) << ',' << format_double(r.q90_error) << ','
            << format_double(r.mean_error) << ',' << format_double(r.theory_bound) << ','
            << (r.theorem_applies ? 1 : 0) << '\n';
    }
}

std::string rate_study_gnuplot(const std::string& csv_name, const experiments::RateTable& table) {
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set xlabel 'N t'\n"
      << "set ylabel 'spectral error'\n"
      << "set key top right\n"
      << "slope = " << format_double(table.fitted_slope) << "\n"
      << "intercept = " << format_double(table.fitted_intercept) << "\n"
      << "fit_line(x) = exp(intercept) * x**slope\n"
      << "plot '" << csv_name << "' skip 1 using 3:5 with linespoints title 'median error', \\\n"
      << "     '" << csv_name << "' skip 1 using 3:6 with linespoints title '90% quantile', \\\n"
      << "     '" << csv_name << "' skip 1 using 3:8 with lines dashtype 2 title 'bound (eps = "
      << format_double(table.eps) << ")', \\\n"
      << "     fit_line(x) with lines title sprintf('fit, slope %.3f', slope)\n";
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace elastica::cli
