#include "elastica/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "elastica/cli/io.hpp"
#include "elastica/simulate.hpp"

namespace elastica::cli {

namespace {

std::string compose(const std::string& source, std::size_t line, const std::string& key_path, const std::string& what) {
    std::string msg = source;
    if (line > 0) {
        msg += ":" + std::to_string(line);
    }
    msg += ": ";
    if (!key_path.empty()) {
        msg += key_path + ": ";
    }
    return msg + what;
}

using json = nlohmann::json;

// Key names from the root down to a value. Array positions are not tracked,
// so errors inside arrays point at the enclosing key's line.
using Keys = std::vector<std::string>;

class Reader {
public:
    Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const Keys& keys, const std::string& path, const std::string& what) const {
        throw ConfigError(source_, line_of(keys), path, what);
    }

    [[noreturn]] void fail_at_offset(std::size_t offset, const std::string& what) const {
        throw ConfigError(source_, line_at(offset), "", what);
    }

    void only_keys(const json& obj, const Keys& keys, const std::string& prefix,
                   std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                Keys k = keys;
                k.push_back(key);
                fail(k, prefix + key, "unknown key");
            }
        }
    }

    double number(const json& v, const Keys& keys, const std::string& path) const {
        if (!v.is_number()) {
            fail(keys, path, "expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(keys, path, "must be finite");
        }
        return x;
    }

    std::uint64_t unsigned_int(const json& v, const Keys& keys, const std::string& path) const {
        if (v.is_number_unsigned()) {
            return v.get<std::uint64_t>();
        }
        if (v.is_number_integer()) {
            fail(keys, path, "must be non-negative");
        }
        fail(keys, path, "expected a non-negative integer");
    }

private:
    std::size_t line_at(std::size_t offset) const {
        offset = std::min(offset, text_.size());
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    }

    // First `"key" :` after the position of the previous key.
    std::size_t line_of(const Keys& keys) const {
        std::size_t pos = 0;
        for (const auto& key : keys) {
            const std::string needle = "\"" + key + "\"";
            std::size_t at = text_.find(needle, pos);
            while (at != std::string_view::npos) {
                std::size_t after = at + needle.size();
                while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) {
                    ++after;
                }
                if (after < text_.size() && text_[after] == ':') {
                    break;
                }
                at = text_.find(needle, at + 1);
            }
            if (at == std::string_view::npos) {
                return 0;
            }
            pos = at;
        }
        return keys.empty() ? 0 : line_at(pos);
    }

    std::string_view text_;
    std::string source_;
};

std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

SymMatrix read_theta(const Reader& r, const json& v) {
    const Keys keys{"theta"};
    if (!v.is_array() || v.empty()) {
        r.fail(keys, "theta", "expected a non-empty array of rows");
    }
    const std::size_t d = v.size();
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& row = v[i];
        if (!row.is_array() || row.size() != d) {
            r.fail(keys, index_path("theta", i), "expected a row of " + std::to_string(d) + " numbers");
        }
        for (std::size_t j = 0; j < d; ++j) {
            m(i, j) = r.number(row[j], keys, index_path(index_path("theta", i), j));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (m(i, j) != m(j, i)) {
                std::ostringstream msg;
                msg << "theta must be symmetric: theta[" << i << "][" << j << "] = " << format_double(m(i, j))
                    << " but theta[" << j << "][" << i << "] = " << format_double(m(j, i));
                r.fail(keys, index_path(index_path("theta", i), j), msg.str());
            }
        }
    }
    return SymMatrix(std::move(m));
}

Campaign read_campaign(const Reader& r, const json& v) {
    const Keys keys{"campaign"};
    if (!v.is_object()) {
        r.fail(keys, "campaign", "expected an object");
    }
    r.only_keys(v, keys, "campaign.", {"n_replicates", "eps", "grid", "store_noise"});
    Campaign c;
    if (v.contains("n_replicates")) {
        const Keys k{"campaign", "n_replicates"};
        c.n_replicates = static_cast<std::size_t>(r.unsigned_int(v["n_replicates"], k, "campaign.n_replicates"));
        if (c.n_replicates == 0) {
            r.fail(k, "campaign.n_replicates", "must be >= 1");
        }
    }
    if (v.contains("eps")) {
        const Keys k{"campaign", "eps"};
        c.eps = r.number(v["eps"], k, "campaign.eps");
        if (!(c.eps > 0.0 && c.eps < 1.0)) {
            r.fail(k, "campaign.eps", "must lie in (0, 1)");
        }
    }
    if (v.contains("store_noise")) {
        if (!v["store_noise"].is_boolean()) {
            r.fail({"campaign", "store_noise"}, "campaign.store_noise", "expected true or false");
        }
        c.store_noise = v["store_noise"].get<bool>();
    }
    if (v.contains("grid")) {
        const Keys k{"campaign", "grid"};
        const auto& g = v["grid"];
        if (!g.is_array()) {
            r.fail(k, "campaign.grid", "expected an array of {\"n\": ..., \"t\": ...} points");
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string path = index_path("campaign.grid", i);
            const auto& p = g[i];
            if (!p.is_object()) {
                r.fail(k, path, "expected an object with keys n and t");
            }
            for (const auto& [key, value] : p.items()) {
                if (key != "n" && key != "t") {
                    r.fail(k, path + "." + key, "unknown key");
                }
            }
            if (!p.contains("n") || !p.contains("t")) {
                r.fail(k, path, "needs both n and t");
            }
            experiments::GridPoint gp;
            gp.n = static_cast<std::size_t>(r.unsigned_int(p["n"], k, path + ".n"));
            gp.t = r.number(p["t"], k, path + ".t");
            if (gp.n < 2) {
                r.fail(k, path + ".n", "must be >= 2");
            }
            if (!(gp.t > 0.0)) {
                r.fail(k, path + ".t", "must be positive");
            }
            c.grid.push_back(gp);
        }
    }
    return c;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& key_path,
                         const std::string& what)
    : ValidationError(compose(source, line, key_path, what)), line_(line), key_path_(key_path) {}

std::string_view to_string(Simulator s) noexcept {
    switch (s) {
        case Simulator::Interacting:
            return "interacting";
        case Simulator::OuExact:
            return "ou-exact";
        case Simulator::OuEuler:
            return "ou-euler";
    }
    return "interacting";
}

RunConfig parse_config_text(std::string_view text, const std::string& source_name) {
    const Reader r(text, source_name);
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        r.fail_at_offset(e.byte == 0 ? 0 : e.byte - 1, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        r.fail({}, "", "the config must be a JSON object");
    }
    r.only_keys(j, {}, "",
                {"n_particles", "dim", "theta", "sigma", "init_variances", "t_final", "n_steps", "seed", "simulator",
                 "campaign"});

    RunConfig rc;
    SystemConfig& c = rc.system;
    if (!j.contains("theta")) {
        r.fail({}, "theta", "required key is missing");
    }
    c.theta = read_theta(r, j["theta"]);
    c.dim = c.theta.dim();
    if (j.contains("dim")) {
        const auto dim = r.unsigned_int(j["dim"], {"dim"}, "dim");
        if (dim != c.dim) {
            r.fail({"dim"}, "dim", "is " + std::to_string(dim) + " but theta is " + std::to_string(c.dim) + "x" +
                                       std::to_string(c.dim));
        }
    }
    if (!j.contains("n_particles")) {
        r.fail({}, "n_particles", "required key is missing");
    }
    c.n_particles = static_cast<std::size_t>(r.unsigned_int(j["n_particles"], {"n_particles"}, "n_particles"));
    if (c.n_particles < 1) {
        r.fail({"n_particles"}, "n_particles", "must be >= 1");
    }
    if (j.contains("sigma")) {
        c.sigma = r.number(j["sigma"], {"sigma"}, "sigma");
        if (c.sigma < 0.0) {
            r.fail({"sigma"}, "sigma", "must be non-negative");
        }
    }
    if (j.contains("t_final")) {
        c.t_final = r.number(j["t_final"], {"t_final"}, "t_final");
        if (!(c.t_final > 0.0)) {
            r.fail({"t_final"}, "t_final", "must be positive");
        }
    }
    try {
        if (!(sym_eigen(c.theta).values.back() > 0.0)) {
            r.fail({"theta"}, "theta", "must be positive definite");
        }
    } catch (const EigenError& e) {
        r.fail({"theta"}, "theta", e.what());
    }
    if (j.contains("init_variances")) {
        const Keys k{"init_variances"};
        const auto& v = j["init_variances"];
        if (!v.is_array() || v.size() != c.dim) {
            r.fail(k, "init_variances", "expected an array of " + std::to_string(c.dim) + " numbers");
        }
        c.init_variances.assign(c.dim, 0.0);
        for (std::size_t q = 0; q < c.dim; ++q) {
            c.init_variances[q] = r.number(v[q], k, index_path("init_variances", q));
            if (c.init_variances[q] < 0.0) {
                r.fail(k, index_path("init_variances", q), "must be non-negative");
            }
        }
    } else {
        c.init_variances.assign(c.dim, 0.0);
        for (std::size_t q = 0; q < c.dim; ++q) {
            c.init_variances[q] = c.sigma * c.sigma / (2.0 * c.theta(q, q));
        }
    }
    if (j.contains("n_steps")) {
        c.n_steps = static_cast<std::size_t>(r.unsigned_int(j["n_steps"], {"n_steps"}, "n_steps"));
        if (c.n_steps < 1) {
            r.fail({"n_steps"}, "n_steps", "must be >= 1");
        }
    } else {
        c.n_steps = default_step_count(c.theta, c.t_final);
    }
    if (j.contains("seed")) {
        c.seed = r.unsigned_int(j["seed"], {"seed"}, "seed");
    }
    if (j.contains("simulator")) {
        const auto& s = j["simulator"];
        if (!s.is_string()) {
            r.fail({"simulator"}, "simulator", "expected a string");
        }
        const auto name = s.get<std::string>();
        if (name == "interacting") {
            rc.simulator = Simulator::Interacting;
        } else if (name == "ou-exact") {
            rc.simulator = Simulator::OuExact;
        } else if (name == "ou-euler") {
            rc.simulator = Simulator::OuEuler;
        } else {
            r.fail({"simulator"}, "simulator",
                   "unknown simulator '" + name + "' (expected interacting, ou-exact or ou-euler)");
        }
    }
    if (j.contains("campaign")) {
        rc.campaign = read_campaign(r, j["campaign"]);
    }
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(source_name, 0, "", e.what());
    }
    return rc;
}

RunConfig parse_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError(path.string(), 0, "", "no such file");
    }
    return parse_config_text(read_text_file(path), path.string());
}

nlohmann::json resolved_json(const RunConfig& config) {
    const SystemConfig& c = config.system;
    json theta = json::array();
    for (std::size_t i = 0; i < c.dim; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < c.dim; ++j) {
            row.push_back(c.theta(i, j));
        }
        theta.push_back(std::move(row));
    }
    json grid = json::array();
    for (const auto& p : config.campaign.grid) {
        grid.push_back({{"n", p.n}, {"t", p.t}});
    }
    return {
        {"n_particles", c.n_particles},
        {"dim", c.dim},
        {"theta", std::move(theta)},
        {"sigma", c.sigma},
        {"init_variances", c.init_variances},
        {"t_final", c.t_final},
        {"n_steps", c.n_steps},
        {"seed", c.seed},
        {"simulator", std::string(to_string(config.simulator))},
        {"campaign",
         {{"n_replicates", config.campaign.n_replicates},
          {"eps", config.campaign.eps},
          {"grid", std::move(grid)},
          {"store_noise", config.campaign.store_noise}}},
    };
}

}  // namespace elastica::cli
