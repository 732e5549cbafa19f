#include "elastica/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "elastica/cli/config.hpp"
#include "elastica/cli/io.hpp"
#include "elastica/cli/manifest.hpp"
#include "elastica/errors.hpp"
#include "elastica/estimator.hpp"
#include "elastica/experiments.hpp"
#include "elastica/likelihood.hpp"
#include "elastica/simulate.hpp"
#include "elastica/theory.hpp"

namespace elastica::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Options {
    std::string config;
    std::string out = ".";
    bool out_given = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;
    bool enforce_theorem = false;
    std::string trajectory;

    // theory
    double sigma = 1.0;
    double theta = 1.0;
    std::size_t dim = 1;
    std::size_t n = 400;
    double t = 1.0;
    double eps = 0.0;
    bool eps_given = false;
    double tau2 = 0.0;
    double u = 0.0;
    std::optional<double> v;
    std::optional<double> c;
    std::optional<double> x;
};

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json check_json(const experiments::FrequencyCheck& c) {
    return {{"name", c.name},       {"violations", c.violations}, {"trials", c.trials}, {"frequency", c.frequency},
            {"nominal", c.nominal}, {"allowed", c.allowed},       {"passed", c.passed}};
}

json checks_json(const std::vector<experiments::FrequencyCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back(check_json(c));
    }
    return arr;
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

class Run {
public:
    Run(std::string subcommand, const fs::path& out_dir) : out_dir_(out_dir) {
        manifest_.tool_version = tool_version();
        manifest_.subcommand = std::move(subcommand);
        manifest_.started_at = iso8601_utc(std::chrono::system_clock::now());
        fs::create_directories(out_dir_);
    }

    void resolved_config(const json& resolved, std::uint64_t seed) {
        const std::string text = dump(resolved);
        write("resolved_config.json", text);
        manifest_.config_digest = sha256_hex(text);
        manifest_.master_seed = seed;
    }

    void write(const std::string& name, const std::string& content) const {
        write_text_file(out_dir_ / name, content);
    }

    [[nodiscard]] fs::path path(const std::string& name) const {
        return out_dir_ / name;
    }

    void finish() {
        manifest_.finished_at = iso8601_utc(std::chrono::system_clock::now());
        write("manifest.json", dump(to_json(manifest_)));
    }

private:
    fs::path out_dir_;
    RunManifest manifest_;
};

RunConfig load(const Options& o) {
    if (o.config.empty()) {
        throw ConfigError("<command line>", 0, "--config", "a config file is required");
    }
    RunConfig rc = parse_config(o.config);
    if (o.seed_given) {
        rc.system.seed = o.seed;
    }
    return rc;
}

Run start(const std::string& subcommand, const Options& o, const RunConfig& rc) {
    Run run(subcommand, o.out);
    run.resolved_config(resolved_json(rc), rc.system.seed);
    return run;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o);
    if (auto w = step_rule_warning(rc.system)) {
        err << "warning: " << *w << '\n';
    }
    Run run = start("simulate", o, rc);
    const bool noise = rc.campaign.store_noise;
    const TrajectoryBundle bundle = [&] {
        switch (rc.simulator) {
            case Simulator::OuExact:
                return simulate_ou_exact(rc.system, noise);
            case Simulator::OuEuler:
                return simulate_ou_euler(rc.system, noise);
            case Simulator::Interacting:
                break;
        }
        return simulate_interacting(rc.system, noise);
    }();
    {
        std::ofstream f(run.path("trajectory.csv"), std::ios::binary | std::ios::trunc);
        write_trajectory_csv(f, bundle);
    }
    if (noise) {
        std::ofstream f(run.path("noise.csv"), std::ios::binary | std::ios::trunc);
        write_noise_csv(f, bundle);
    }
    run.finish();
    out << "simulated " << bundle.n_particles() << " particles x " << bundle.n_times() << " time points ("
        << to_string(rc.simulator) << ") -> " << run.path("trajectory.csv").string() << '\n';
    return kSuccess;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    const RunConfig rc = load(o);
    if (o.trajectory.empty()) {
        throw ConfigError("<command line>", 0, "--trajectory", "estimate needs a trajectory CSV");
    }
    const TrajectoryBundle bundle = read_trajectory_file(o.trajectory, rc.system);
    Run run = start("estimate", o, rc);
    const SufficientStats stats = sufficient_stats(bundle);
    const EstimateResult r = mle_matrix(stats, rc.system.theta);
    json diag = nullptr;
    try {
        diag = mle_diagonal(stats);
    } catch (const ZeroDenominatorError&) {
        // left null; the matrix estimate above already succeeded
    }
    const json result = {
        {"theta_hat", matrix_json(r.theta_hat.matrix())},
        {"theta_hat_raw", matrix_json(r.theta_hat_raw)},
        {"theta_hat_sym_mle", matrix_json(r.theta_hat_sym_mle.matrix())},
        {"diag_estimates", diag},
        {"spectral_error", *r.spectral_error},
        {"spectral_error_sym_mle", spectral_error(r.theta_hat_sym_mle, rc.system.theta)},
        {"gram_condition", r.gram_condition},
        {"min_eigenvalue", r.min_eigenvalue},
        {"log_likelihood", log_likelihood(bundle, r.theta_hat)},
        {"n_particles", stats.n_particles},
        {"t_final", stats.t_final},
    };
    run.write("estimate.json", dump(result));
    run.finish();
    out << "spectral error " << format_double(*r.spectral_error) << " -> " << run.path("estimate.json").string()
        << '\n';
    return kSuccess;
}

std::vector<std::string> grid_violations(const RunConfig& rc) {
    std::vector<std::string> out;
    for (const auto& p : rc.campaign.grid) {
        SystemConfig c = rc.system;
        c.n_particles = p.n;
        c.t_final = p.t;
        for (const auto& v : theory::theorem_preconditions(c, rc.campaign.eps)) {
            out.push_back("(N = " + std::to_string(p.n) + ", t = " + format_double(p.t) + "): " + v.message);
        }
    }
    return out;
}

int cmd_rate_study(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o);
    if (rc.campaign.grid.empty()) {
        throw ConfigError(o.config, 0, "campaign.grid", "rate-study needs a non-empty grid");
    }
    if (o.enforce_theorem) {
        const auto violations = grid_violations(rc);
        if (!violations.empty()) {
            err << "theorem hypotheses violated:\n";
            for (const auto& v : violations) {
                err << "  " << v << '\n';
            }
            return kConfigError;
        }
    }
    Run run = start("rate-study", o, rc);
    const auto table = experiments::rate_study(rc.system, rc.campaign.grid, rc.campaign.n_replicates,
                                               rc.campaign.eps, o.threads);
    std::ostringstream csv;
    write_rate_table_csv(csv, table);
    run.write("rate_study.csv", csv.str());
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"n", r.n},
                        {"t", r.t},
                        {"nt", r.nt},
                        {"n_replicates", r.n_replicates},
                        {"median_error", r.median_error},
                        {"q90_error", r.q90_error},
                        {"mean_error", r.mean_error},
                        {"theory_bound", r.theory_bound},
                        {"theorem_applies", r.theorem_applies}});
    }
    run.write("rate_study.json", dump({{"rows", rows},
                                       {"fitted_slope", table.fitted_slope},
                                       {"fitted_intercept", table.fitted_intercept},
                                       {"eps", table.eps}}));
    run.write("rate_study.gp", rate_study_gnuplot("rate_study.csv", table));
    run.finish();
    out << "fitted slope " << format_double(table.fitted_slope) << " over " << table.rows.size() << " rows -> "
        << run.path("rate_study.csv").string() << '\n';
    return kSuccess;
}

int cmd_verify(const std::string& which, const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o);
    const auto& sys = rc.system;
    const std::size_t reps = rc.campaign.n_replicates;
    const double eps = rc.campaign.eps;
    Run run = start("verify " + which, o, rc);
    json report;
    bool passed = false;
    if (which == "decoupling") {
        const auto r = experiments::verify_decoupling(sys, reps, eps, o.threads);
        report = {{"n_replicates", r.n_replicates},
                  {"eps", r.eps},
                  {"constants", {{"c1", r.constants.c1}, {"c2", r.constants.c2}, {"c", r.constants.c}}},
                  {"max_coupling_deviation", r.max_coupling_deviation},
                  {"coupling_identity_holds", r.coupling_identity_holds},
                  {"decoupling_threshold", r.decoupling_threshold},
                  {"median_decoupling_integral", r.median_decoupling_integral},
                  {"martingale_threshold", r.martingale_threshold},
                  {"decoupling_checks", checks_json(r.decoupling_checks)},
                  {"martingale_checks", checks_json(r.martingale_checks)}};
        passed = r.passed();
    } else if (which == "ou-concentration") {
        const auto r = experiments::verify_ou_concentration(sys, reps, eps, o.threads);
        report = {{"n_replicates", r.n_replicates},
                  {"eps", r.eps},
                  {"fluctuation_threshold", r.fluctuation_threshold},
                  {"martingale_threshold", r.martingale_threshold},
                  {"fluctuation_checks", checks_json(r.fluctuation_checks)},
                  {"martingale_checks", checks_json(r.martingale_checks)},
                  {"mean_square_integral_mean", r.mean_square_integral_mean},
                  {"mean_square_integral_se", r.mean_square_integral_se},
                  {"mean_square_integral_expected", r.mean_square_integral_expected},
                  {"stationary_value", r.stationary_value}};
        passed = r.passed();
    } else {
        const auto r = experiments::coverage_check(sys, reps, eps, o.threads, o.enforce_theorem);
        json violations = json::array();
        for (const auto& v : r.violations) {
            violations.push_back(v.message);
        }
        report = {{"n_replicates", r.n_replicates},
                  {"eps", r.eps},
                  {"bound", r.bound},
                  {"coverage", r.coverage},
                  {"required", r.required},
                  {"theorem_violations", violations},
                  {"errors", r.errors}};
        passed = r.passed();
        if (!r.violations.empty()) {
            err << "warning: the theorem's hypotheses do not hold for this config; the bound is evaluated anyway\n";
        }
    }
    report["passed"] = passed;
    run.write("verify_" + which + ".json", dump(report));
    run.finish();
    out << which << ": " << (passed ? "passed" : "FAILED") << " -> " << run.path("verify_" + which + ".json").string()
        << '\n';
    return passed ? kSuccess : kVerificationFailed;
}

int cmd_theory(const std::string& which, const Options& o, std::ostream& out) {
    json params;
    json result;
    if (which == "rate-bound") {
        params = {{"sigma", o.sigma}, {"theta1", o.theta}, {"dim", o.dim}, {"n", o.n}, {"t", o.t}, {"eps", o.eps}};
        if (o.enforce_theorem) {
            result["rate_bound"] = theory::rate_bound(o.sigma, o.theta, o.dim, o.n, o.t, o.eps);
        } else {
            result["rate_bound"] = theory::rate_bound_formula(o.sigma, o.theta, o.dim, o.n, o.t, o.eps);
        }
        result["probability"] = 1.0 - 14.0 * o.eps;
        const double lo = std::exp(-static_cast<double>(o.n) / 400.0);
        result["hypotheses_hold"] = o.n >= 400 && o.eps >= lo && o.eps < 1.0;
    } else if (which == "ou-moments") {
        params = {{"theta", o.theta}, {"sigma", o.sigma}, {"tau2", o.tau2}, {"t", o.t}};
        const auto m = theory::ou_moments(o.theta, o.sigma, o.tau2, o.t);
        result = {{"mean", m.mean}, {"variance", m.variance}};
    } else if (which == "constants") {
        const double eps = o.eps_given ? o.eps : std::exp(-static_cast<double>(o.n) / 400.0);
        params = {{"n", o.n}, {"eps", eps}};
        const auto k = theory::decoupling_constants(eps, o.n);
        result = {{"c1", k.c1},
                  {"c2", k.c2},
                  {"c", k.c},
                  {"fluctuation_factor", theory::fluctuation_factor(o.n, eps)},
                  {"denominator_constant", theory::denominator_lower_bound_constant()}};
    } else {
        params = {{"u", o.u}};
        result = {{"log_mgf", theory::chi2_log_mgf(o.u)}};
        if (o.u > -0.5) {
            result["bound"] = theory::chi2_log_mgf_bound(o.u);
        }
        if (o.v && o.c && o.x) {
            params["v"] = *o.v;
            params["c"] = *o.c;
            params["x"] = *o.x;
            result["tail_threshold"] = theory::mgf_tail_threshold(*o.v, *o.c, *o.x);
        }
    }
    const json doc = {{"quantity", which}, {"parameters", params}, {"result", result}};
    out << dump(doc);
    if (o.out_given) {
        Run run("theory " + which, o.out);
        run.resolved_config(params, 0);
        run.write("theory_" + which + ".json", dump(doc));
        run.finish();
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Simulate interacting particle systems and estimate their interaction matrix", "elastica"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    auto* config_opt = app.add_option("--config", o.config, "JSON config file");
    auto* out_opt = app.add_option("--out", o.out, "Output directory");
    auto* seed_opt = app.add_option("--seed", o.seed, "Master seed (overrides the config)");
    app.add_option("--threads", o.threads, "Worker threads, 0 = all cores")->envname("ELASTICA_MLE_THREADS");
    app.add_flag("--enforce-theorem", o.enforce_theorem, "Fail when the rate theorem's hypotheses do not hold");
    (void)config_opt;

    auto* simulate = app.add_subcommand("simulate", "Simulate trajectories to CSV")->fallthrough();
    auto* estimate = app.add_subcommand("estimate", "Estimate theta from a trajectory CSV")->fallthrough();
    estimate->add_option("--trajectory", o.trajectory, "Trajectory CSV written by simulate")->required();
    auto* rate = app.add_subcommand("rate-study", "Estimation error across a grid of (N, t)")->fallthrough();

    auto* verify = app.add_subcommand("verify", "Monte Carlo checks of the concentration bounds")->fallthrough();
    verify->require_subcommand(1);
    for (const char* name : {"decoupling", "ou-concentration", "coverage"}) {
        verify->add_subcommand(name)->fallthrough();
    }

    auto* theory_cmd = app.add_subcommand("theory", "Evaluate bounds and constants")->fallthrough();
    theory_cmd->require_subcommand(1);
    auto* rb = theory_cmd->add_subcommand("rate-bound", "Error bound of the rate theorem")->fallthrough();
    rb->add_option("--sigma", o.sigma, "Noise level")->capture_default_str();
    rb->add_option("--theta1", o.theta, "Largest eigenvalue of theta")->required();
    rb->add_option("--dim", o.dim, "Dimension d")->capture_default_str();
    rb->add_option("--n", o.n, "Number of particles")->required();
    rb->add_option("--t", o.t, "Time horizon")->required();
    rb->add_option("--eps", o.eps, "Failure level")->required();
    auto* om = theory_cmd->add_subcommand("ou-moments", "Mean and variance of an OU process")->fallthrough();
    om->add_option("--theta", o.theta, "Mean-reversion rate")->required();
    om->add_option("--sigma", o.sigma, "Noise level")->capture_default_str();
    om->add_option("--tau2", o.tau2, "Initial variance")->capture_default_str();
    om->add_option("--t", o.t, "Time")->required();
    auto* ks = theory_cmd->add_subcommand("constants", "Decoupling constants and fluctuation factor")->fallthrough();
    ks->add_option("--n", o.n, "Number of particles")->required();
    auto* eps_opt = ks->add_option("--eps", o.eps, "Failure level (default e^{-N/400})");
    auto* mgf = theory_cmd->add_subcommand("mgf", "Log-MGF of a centered chi-square variable")->fallthrough();
    mgf->add_option("--u", o.u, "Argument, u < 1/2")->required();
    mgf->add_option("--v", o.v, "Variance proxy for the tail threshold");
    mgf->add_option("--c", o.c, "Scale for the tail threshold");
    mgf->add_option("--x", o.x, "Deviation level for the tail threshold");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }
    o.out_given = out_opt->count() > 0;
    o.seed_given = seed_opt->count() > 0;
    o.eps_given = eps_opt->count() > 0;

    try {
        if (simulate->parsed()) {
            return cmd_simulate(o, out, err);
        }
        if (estimate->parsed()) {
            return cmd_estimate(o, out);
        }
        if (rate->parsed()) {
            return cmd_rate_study(o, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(verify->get_subcommands().front()->get_name(), o, out, err);
        }
        return cmd_theory(theory_cmd->get_subcommands().front()->get_name(), o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace elastica::cli
