#include "elastica/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "detail.hpp"
#include "elastica/errors.hpp"
#include "elastica/estimator.hpp"
#include "elastica/likelihood.hpp"
#include "elastica/random.hpp"
#include "elastica/simulate.hpp"

namespace elastica::experiments {

namespace {

constexpr double kCouplingTolerance = 1e-10;

// Runs body(i) for i in [0, count). Each index writes only its own output slot,
// so the result is independent of scheduling. The exception of the lowest
// failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                             static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

SystemConfig with_seed(SystemConfig config, std::uint64_t seed) {
    config.seed = seed;
    return config;
}

// Coordinates of x along the eigenvectors (columns of v).
void project(const Matrix& v, std::span<const double> x, std::span<double> out) {
    const std::size_t d = x.size();
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
            s += v(l, j) * x[l];
        }
        out[j] = s;
    }
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_noise(const SystemConfig& config) {
    if (!(config.sigma > 0.0)) {
        throw ValidationError("verification campaigns need sigma > 0");
    }
}

}  // namespace

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw ValidationError("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate) {
    return derive_stream_seed(master, replicate, ~std::uint64_t{0});
}

ReplicateResult run_replicate(const SystemConfig& config, std::size_t replicate) {
    const std::uint64_t seed = replicate_seed(config.seed, replicate);
    const TrajectoryBundle bundle = simulate_interacting(with_seed(config, seed));
    const EstimateResult est = mle_matrix(sufficient_stats(bundle), config.theta);

    std::vector<double> diag_errors(config.dim);
    for (std::size_t j = 0; j < config.dim; ++j) {
        diag_errors[j] = std::abs(est.theta_hat(j, j) - config.theta(j, j));
    }
    return ReplicateResult{replicate,      seed, est.theta_hat, *est.spectral_error, std::move(diag_errors),
                           est.gram_condition};
}

std::vector<ReplicateResult> run_replicates(const SystemConfig& config, std::size_t count, unsigned threads) {
    config.validate();
    std::vector<ReplicateResult> out(count);
    parallel_for(count, threads, [&](std::size_t r) { out[r] = run_replicate(config, r); });
    return out;
}

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw ValidationError("log-log fit needs positive x and y");
        }
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    if (lx.size() < 2 || std::all_of(lx.begin(), lx.end(), [&](double v) { return v == lx.front(); })) {
        throw DegenerateGridError("log-log fit needs at least two distinct x values");
    }
    const double mx = mean_of(lx);
    const double my = mean_of(ly);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

RateTable rate_study(const SystemConfig& base, std::span<const GridPoint> grid, std::size_t n_replicates,
                     double eps, unsigned threads) {
    base.validate();
    if (grid.empty() || n_replicates == 0) {
        throw ValidationError("rate study needs a non-empty grid and at least one replicate");
    }
    std::vector<GridPoint> points(grid.begin(), grid.end());
    std::stable_sort(points.begin(), points.end(), [](const GridPoint& a, const GridPoint& b) {
        return static_cast<double>(a.n) * a.t < static_cast<double>(b.n) * b.t;
    });
    const double nt_lo = static_cast<double>(points.front().n) * points.front().t;
    const double nt_hi = static_cast<double>(points.back().n) * points.back().t;
    if (!(nt_hi >= 8.0 * nt_lo)) {
        std::ostringstream msg;
        msg << "rate study grid must span a factor of 8 in N t (got " << nt_lo << " .. " << nt_hi << ")";
        throw DegenerateGridError(msg.str());
    }

    const double h = base.step_size();
    const double theta1 = base.theta_max();
    RateTable table;
    table.eps = eps;
    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t row = 0; row < points.size(); ++row) {
        const auto& p = points[row];
        SystemConfig cfg = base;
        cfg.n_particles = p.n;
        cfg.t_final = p.t;
        cfg.n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.t / h)));
        cfg.seed = derive_stream_seed(base.seed, row, ~std::uint64_t{0} - 1);

        const auto results = run_replicates(cfg, n_replicates, threads);
        std::vector<double> errors;
        errors.reserve(results.size());
        for (const auto& r : results) {
            errors.push_back(r.spectral_error);
        }

        RateRow out;
        out.n = p.n;
        out.t = p.t;
        out.nt = static_cast<double>(p.n) * p.t;
        out.n_replicates = n_replicates;
        out.median_error = quantile(errors, 0.5);
        out.q90_error = quantile(errors, 0.9);
        out.mean_error = mean_of(errors);
        out.theory_bound = theory::rate_bound_formula(cfg.sigma, theta1, cfg.dim, p.n, p.t, eps);
        out.theorem_applies = theory::theorem_preconditions(cfg, eps).empty();
        table.rows.push_back(out);
        fit_points.emplace_back(out.nt, out.median_error);
    }
    const auto fit = fit_loglog_slope(fit_points);
    table.fitted_slope = fit.slope;
    table.fitted_intercept = fit.intercept;
    return table;
}

FrequencyCheck make_frequency_check(std::string name, std::size_t violations, std::size_t trials, double nominal) {
    FrequencyCheck c;
    c.name = std::move(name);
    c.violations = violations;
    c.trials = trials;
    c.frequency = trials == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(trials);
    c.nominal = nominal;
    const double p = std::clamp(nominal, 0.0, 1.0);
    c.allowed = nominal + (trials == 0 ? 0.0 : 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
    c.passed = c.frequency <= c.allowed;
    return c;
}

CoverageReport coverage_check(const SystemConfig& config, std::size_t n_replicates, double eps, unsigned threads,
                              bool enforce_preconditions) {
    config.validate();
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("coverage_check: eps must lie in (0, 1)");
    }
    auto violated = theory::theorem_preconditions(config, eps);
    if (enforce_preconditions && !violated.empty()) {
        std::string msg = "theorem hypotheses violated:";
        for (const auto& v : violated) {
            msg += " [" + v.message + "]";
        }
        throw PreconditionError(msg);
    }
    CoverageReport report;
    report.eps = eps;
    report.n_replicates = n_replicates;
    report.required = 1.0 - 14.0 * eps;
    report.bound = theory::rate_bound_formula(config.sigma, config.theta_max(), config.dim, config.n_particles,
                                              config.t_final, eps);
    report.violations = std::move(violated);
    const auto results = run_replicates(config, n_replicates, threads);
    std::size_t covered = 0;
    for (const auto& r : results) {
        report.errors.push_back(r.spectral_error);
        covered += r.spectral_error <= report.bound ? 1 : 0;
    }
    report.coverage = n_replicates == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(n_replicates);
    return report;
}

bool DecouplingReport::passed() const noexcept {
    if (!coupling_identity_holds) {
        return false;
    }
    auto ok = [](const FrequencyCheck& c) { return c.passed; };
    return std::all_of(decoupling_checks.begin(), decoupling_checks.end(), ok) &&
           std::all_of(martingale_checks.begin(), martingale_checks.end(), ok);
}

DecouplingReport verify_decoupling(const SystemConfig& config, std::size_t n_replicates, double eps,
                                   unsigned threads) {
    config.validate();
    require_noise(config);
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    const double h = config.step_size();
    const double t = config.t_final;
    const auto eig = sym_eigen(config.theta);

    DecouplingReport report;
    report.n_replicates = n_replicates;
    report.eps = eps;
    report.constants = theory::decoupling_constants(eps, n);
    for (std::size_t j = 0; j < d; ++j) {
        const double lambda = eig.values[j];
        report.decoupling_threshold.push_back(t * config.sigma * config.sigma / lambda * report.constants.c);
        report.martingale_threshold.push_back(theory::martingale_threshold(t, lambda, config.sigma, n, eps));
    }

    struct Sample {
        double deviation = 0.0;
        std::vector<double> integral;
        std::vector<double> martingale;
    };
    std::vector<Sample> samples(n_replicates);
    parallel_for(n_replicates, threads, [&](std::size_t r) {
        const auto coupled = simulate_coupled(with_seed(config, replicate_seed(config.seed, r)));
        const auto& x = coupled.interacting;
        const auto& y = coupled.decoupled;
        Sample s{coupling_deviation(coupled), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};

        std::vector<double> mean(d), dev(d), delta(d), dw(d), pd(d), py(d), pdelta(d), pdw(d);
        for (std::size_t k = 0; k < x.n_steps(); ++k) {
            detail::particle_mean(x.states().subspan(k * n * d, n * d), n, d, mean);
            for (std::size_t i = 0; i < n; ++i) {
                const auto xi = x.state(k, i);
                const auto yi = y.state(k, i);
                const auto noise = x.noise(k, i);
                for (std::size_t j = 0; j < d; ++j) {
                    dev[j] = mean[j] - xi[j];
                    delta[j] = dev[j] + yi[j];
                    dw[j] = noise[j] / config.sigma;
                }
                project(eig.vectors, dev, pd);
                project(eig.vectors, yi, py);
                project(eig.vectors, delta, pdelta);
                project(eig.vectors, dw, pdw);
                for (std::size_t j = 0; j < d; ++j) {
                    s.integral[j] += h * (pd[j] * pd[j] - py[j] * py[j]);
                    s.martingale[j] += pdelta[j] * pdw[j];
                }
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            s.integral[j] /= static_cast<double>(n);
            s.martingale[j] /= static_cast<double>(n);
        }
        samples[r] = std::move(s);
    });

    report.coupling_identity_holds = true;
    for (const auto& s : samples) {
        report.max_coupling_deviation = std::max(report.max_coupling_deviation, s.deviation);
        report.coupling_identity_holds = report.coupling_identity_holds && s.deviation <= kCouplingTolerance;
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::size_t bad_integral = 0;
        std::size_t bad_martingale = 0;
        std::vector<double> magnitudes;
        for (const auto& s : samples) {
            const double m = std::abs(s.integral[j]);
            magnitudes.push_back(m);
            bad_integral += m > report.decoupling_threshold[j] ? 1 : 0;
            bad_martingale += std::abs(s.martingale[j]) >= report.martingale_threshold[j] ? 1 : 0;
        }
        report.median_decoupling_integral.push_back(magnitudes.empty() ? 0.0 : quantile(magnitudes, 0.5));
        report.decoupling_checks.push_back(make_frequency_check(
            "decoupling_integral[" + std::to_string(j) + "]", bad_integral, n_replicates, 4.0 * eps));
        report.martingale_checks.push_back(make_frequency_check(
            "coupled_martingale[" + std::to_string(j) + "]", bad_martingale, n_replicates, 4.0 * eps));
    }
    return report;
}

bool OuConcentrationReport::passed() const noexcept {
    auto ok = [](const FrequencyCheck& c) { return c.passed; };
    return std::all_of(fluctuation_checks.begin(), fluctuation_checks.end(), ok) &&
           std::all_of(martingale_checks.begin(), martingale_checks.end(), ok);
}

OuConcentrationReport verify_ou_concentration(const SystemConfig& config, std::size_t n_replicates, double eps,
                                              unsigned threads) {
    config.validate();
    require_noise(config);
    const std::size_t n = config.n_particles;
    const double lo = std::exp(-static_cast<double>(n) / 16.0);
    if (!(eps >= lo && eps < 1.0)) {
        std::ostringstream msg;
        msg << "OU concentration check requires eps in [e^{-N/16}, 1) = [" << lo << ", 1) (got " << eps << ")";
        throw PreconditionError(msg.str());
    }
    const std::size_t d = config.dim;
    const double h = config.step_size();
    const double t = config.t_final;
    const auto eig = sym_eigen(config.theta);
    const auto times = TrajectoryBundle::make_time_grid(t, config.n_steps);

    // Left Riemann sum of the exact per-direction variance, and the variance at
    // each left endpoint for centering.
    std::vector<std::vector<double>> variance(d, std::vector<double>(config.n_steps));
    OuConcentrationReport report;
    report.n_replicates = n_replicates;
    report.eps = eps;
    for (std::size_t j = 0; j < d; ++j) {
        const double lambda = eig.values[j];
        double tau2 = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
            tau2 += eig.vectors(l, j) * eig.vectors(l, j) * config.init_variances[l];
        }
        double expected = 0.0;
        for (std::size_t k = 0; k < config.n_steps; ++k) {
            variance[j][k] = theory::ou_moments(lambda, config.sigma, tau2, times[k]).variance;
            expected += h * variance[j][k];
        }
        report.mean_square_integral_expected.push_back(expected);
        report.stationary_value.push_back(t * config.sigma * config.sigma / (2.0 * lambda));
        report.fluctuation_threshold.push_back(theory::fluctuation_threshold(t, lambda, config.sigma, n, eps));
        report.martingale_threshold.push_back(theory::martingale_threshold(t, lambda, config.sigma, n, eps));
    }

    struct Sample {
        std::vector<double> centered;
        std::vector<double> mean_square;
        std::vector<double> martingale;
    };
    std::vector<Sample> samples(n_replicates);
    parallel_for(n_replicates, threads, [&](std::size_t r) {
        const SystemConfig cfg = with_seed(config, replicate_seed(config.seed, r));
        Sample s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
        std::vector<double> py(d), pdw(d), dw(d);

        const auto exact = simulate_ou_exact(cfg);
        for (std::size_t k = 0; k < config.n_steps; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                project(eig.vectors, exact.state(k, i), py);
                for (std::size_t j = 0; j < d; ++j) {
                    const double sq = py[j] * py[j];
                    s.mean_square[j] += h * sq;
                    s.centered[j] += h * (sq - variance[j][k]);
                }
            }
        }

        const auto euler = simulate_ou_euler(cfg, true);
        for (std::size_t k = 0; k < config.n_steps; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto noise = euler.noise(k, i);
                for (std::size_t j = 0; j < d; ++j) {
                    dw[j] = noise[j] / config.sigma;
                }
                project(eig.vectors, euler.state(k, i), py);
                project(eig.vectors, dw, pdw);
                for (std::size_t j = 0; j < d; ++j) {
                    s.martingale[j] += py[j] * pdw[j];
                }
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            s.centered[j] /= static_cast<double>(n);
            s.mean_square[j] /= static_cast<double>(n);
            s.martingale[j] /= static_cast<double>(n);
        }
        samples[r] = std::move(s);
    });

    for (std::size_t j = 0; j < d; ++j) {
        std::size_t bad_fluct = 0;
        std::size_t bad_mart = 0;
        std::vector<double> ms;
        for (const auto& s : samples) {
            bad_fluct += std::abs(s.centered[j]) >= report.fluctuation_threshold[j] ? 1 : 0;
            bad_mart += std::abs(s.martingale[j]) >= report.martingale_threshold[j] ? 1 : 0;
            ms.push_back(s.mean_square[j]);
        }
        const double m = ms.empty() ? 0.0 : mean_of(ms);
        double var = 0.0;
        for (double v : ms) {
            var += (v - m) * (v - m);
        }
        const double se = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1) /
                                                    static_cast<double>(ms.size()))
                                        : 0.0;
        report.mean_square_integral_mean.push_back(m);
        report.mean_square_integral_se.push_back(se);
        report.fluctuation_checks.push_back(make_frequency_check(
            "ou_fluctuation[" + std::to_string(j) + "]", bad_fluct, n_replicates, 2.0 * eps));
        report.martingale_checks.push_back(make_frequency_check(
            "ou_martingale[" + std::to_string(j) + "]", bad_mart, n_replicates, 4.0 * eps));
    }
    return report;
}

}  // namespace elastica::experiments
