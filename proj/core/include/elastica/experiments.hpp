#pragma once

// Seeded Monte Carlo campaigns. Replicate r of a campaign with master seed s
// simulates with seed replicate_seed(s, r), so results never depend on which
// worker thread ran a replicate or in which order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "elastica/theory.hpp"
#include "elastica/types.hpp"

namespace elastica::experiments {

struct ReplicateResult {
    std::size_t replicate_index = 0;
    std::uint64_t seed = 0;
    SymMatrix theta_hat = SymMatrix::identity(1);
    double spectral_error = 0.0;
    std::vector<double> diag_errors;
    double gram_condition = 0.0;
};

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);

/// simulate -> sufficient_stats -> mle_matrix -> spectral_error for one replicate.
ReplicateResult run_replicate(const SystemConfig& config, std::size_t replicate);

/// Replicates 0..count-1 in index order, spread over `threads` workers (0 = hardware).
std::vector<ReplicateResult> run_replicates(const SystemConfig& config, std::size_t count, unsigned threads);

struct GridPoint {
    std::size_t n = 0;
    double t = 0.0;
};

struct RateRow {
    std::size_t n = 0;
    double t = 0.0;
    double nt = 0.0;
    std::size_t n_replicates = 0;
    double median_error = 0.0;
    double q90_error = 0.0;
    double mean_error = 0.0;
    double theory_bound = 0.0;  // rate bound formula at the table's eps
    bool theorem_applies = false;
};

struct RateTable {
    std::vector<RateRow> rows;  // ascending in nt
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
    double eps = 0.0;
};

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares of log y on log x. Throws DegenerateGridError with fewer
/// than two distinct x, ValidationError for non-positive values.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

/// Estimation error across a grid of (N, t). Each row keeps the base step size
/// h = base.t_final / base.n_steps and fits log(median error) against log(N t).
/// Throws DegenerateGridError unless max(Nt) / min(Nt) >= 8.
RateTable rate_study(const SystemConfig& base, std::span<const GridPoint> grid, std::size_t n_replicates,
                     double eps, unsigned threads);

/// Observed frequency of a bad event against its nominal probability, with a
/// one-sided three-sigma binomial allowance.
struct FrequencyCheck {
    std::string name;
    std::size_t violations = 0;
    std::size_t trials = 0;
    double frequency = 0.0;
    double nominal = 0.0;
    double allowed = 0.0;  // nominal + 3 sqrt(nominal (1 - nominal) / trials)
    bool passed = false;
};

FrequencyCheck make_frequency_check(std::string name, std::size_t violations, std::size_t trials, double nominal);

struct CoverageReport {
    double coverage = 0.0;
    double required = 0.0;  // 1 - 14 eps
    double bound = 0.0;
    double eps = 0.0;
    std::size_t n_replicates = 0;
    std::vector<double> errors;  // per replicate, index order
    std::vector<theory::Violation> violations;  // hypotheses that fail; empty when the theorem applies
    [[nodiscard]] bool passed() const noexcept { return coverage >= required; }
};

/// Fraction of replicates whose spectral error is within the rate bound.
/// With `enforce_preconditions` the theorem's hypotheses must hold for (config, eps)
/// (PreconditionError otherwise); without it the bound formula is evaluated
/// anyway and the failed hypotheses are listed in the report.
CoverageReport coverage_check(const SystemConfig& config, std::size_t n_replicates, double eps, unsigned threads,
                              bool enforce_preconditions = true);

// Per-direction quantities below are reported in the eigenbasis of theta,
// ordered by descending eigenvalue.

struct DecouplingReport {
    std::size_t n_replicates = 0;
    double eps = 0.0;
    theory::DecouplingConstants constants;
    double max_coupling_deviation = 0.0;
    bool coupling_identity_holds = false;  // deviation <= 1e-10 in every replicate
    std::vector<double> decoupling_threshold;     // (t sigma^2 / theta_j) C(eps, N)
    std::vector<double> median_decoupling_integral;
    std::vector<double> martingale_threshold;
    std::vector<FrequencyCheck> decoupling_checks;  // nominal 4 eps
    std::vector<FrequencyCheck> martingale_checks;  // nominal 4 eps
    [[nodiscard]] bool passed() const noexcept;
};

/// Couples X with its OU shadow in every replicate and checks the exact
/// coupling identity, the decoupling-integral bound and the coupled
/// martingale bound. Requires sigma > 0.
DecouplingReport verify_decoupling(const SystemConfig& config, std::size_t n_replicates, double eps,
                                   unsigned threads);

struct OuConcentrationReport {
    std::size_t n_replicates = 0;
    double eps = 0.0;
    std::vector<double> fluctuation_threshold;
    std::vector<double> martingale_threshold;
    std::vector<FrequencyCheck> fluctuation_checks;  // nominal 2 eps
    std::vector<FrequencyCheck> martingale_checks;   // nominal 4 eps
    // (1/N) sum_i int |Y^i_j|^2 ds across replicates (exact-transition paths).
    std::vector<double> mean_square_integral_mean;
    std::vector<double> mean_square_integral_se;
    std::vector<double> mean_square_integral_expected;  // left Riemann sum of the exact variance
    std::vector<double> stationary_value;               // t sigma^2 / (2 theta_j)
    [[nodiscard]] bool passed() const noexcept;
};

/// Concentration of independent OU paths: the centered mean-square integral on
/// exact-transition paths, and the Ito integral against stored noise on
/// Euler-Maruyama paths. Throws PreconditionError when eps < e^{-N/16}.
/// Requires sigma > 0.
OuConcentrationReport verify_ou_concentration(const SystemConfig& config, std::size_t n_replicates, double eps,
                                              unsigned threads);

/// Number of worker threads: the argument if non-zero, else hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Linear-interpolation quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> values, double q);

}  // namespace elastica::experiments
