#include "elastica/theory.hpp"

#include <cmath>
#include <sstream>

#include "elastica/errors.hpp"

namespace elastica::theory {

namespace {

double log_inv(double eps) { return -std::log(eps); }

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw ValidationError(std::string(name) + " must be positive");
    }
}

}  // namespace

OuMoments ou_moments(double theta, double sigma, double tau2, double t) {
    require_positive(theta, "theta");
    if (tau2 < 0.0 || t < 0.0) {
        throw ValidationError("ou_moments: tau2 and t must be non-negative");
    }
    const double s2 = sigma * sigma;
    return {0.0, (s2 - (s2 - 2.0 * theta * tau2) * std::exp(-2.0 * theta * t)) / (2.0 * theta)};
}

double rate_bound_formula(double sigma, double theta1, std::size_t d, std::size_t n, double t, double eps) {
    const auto dd = static_cast<double>(d);
    const double nt = static_cast<double>(n) * t;
    return 24.0 * sigma * std::sqrt(theta1) * std::sqrt(2.0 * dd * std::log(dd / eps) / nt);
}

double rate_bound(double sigma, double theta1, std::size_t d, std::size_t n, double t, double eps) {
    require_positive(theta1, "theta1");
    require_positive(t, "t");
    if (d < 1) {
        throw ValidationError("d must be >= 1");
    }
    if (n < 400) {
        throw PreconditionError("rate bound requires N >= 400 (got N = " + std::to_string(n) + ")");
    }
    const double lo = std::exp(-static_cast<double>(n) / 400.0);
    if (!(eps >= lo && eps < 1.0)) {
        std::ostringstream msg;
        msg << "rate bound requires eps in [e^{-N/400}, 1) = [" << lo << ", 1) (got " << eps << ")";
        throw PreconditionError(msg.str());
    }
    return rate_bound_formula(sigma, theta1, d, n, t, eps);
}

std::vector<Violation> theorem_preconditions(const SystemConfig& config, double eps) {
    std::vector<Violation> out;
    const double theta_d = config.theta_min();
    if (!(config.t_final >= 1.0 / theta_d)) {
        std::ostringstream msg;
        msg << "t >= 1/theta_d: t = " << config.t_final << " < " << 1.0 / theta_d;
        out.push_back({Hypothesis::HorizonTooShort, msg.str()});
    }
    if (config.n_particles < 400) {
        out.push_back({Hypothesis::TooFewParticles,
                       "N >= 400: N = " + std::to_string(config.n_particles)});
    }
    const double lo = std::exp(-static_cast<double>(config.n_particles) / 400.0);
    if (!(eps >= lo && eps < 1.0)) {
        std::ostringstream msg;
        msg << "eps in [e^{-N/400}, 1): eps = " << eps << ", lower end " << lo;
        out.push_back({Hypothesis::EpsOutOfRange, msg.str()});
    }
    return out;
}

DecouplingConstants decoupling_constants(double eps, std::size_t n) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("decoupling_constants: eps must lie in (0, 1)");
    }
    if (n < 1) {
        throw DomainError("decoupling_constants: n must be >= 1");
    }
    const double l = log_inv(eps);
    const auto nn = static_cast<double>(n);
    DecouplingConstants k;
    k.c1 = 1.0 / (2.0 * nn) + l / nn + std::sqrt(l / 2.0) / nn;
    k.c2 = 0.5 + l / nn + std::sqrt(l / (2.0 * nn));
    k.c = std::sqrt(k.c1 * (2.0 * k.c1 + 8.0 * k.c2));
    k.eps = eps;
    k.n = n;
    return k;
}

double fluctuation_factor(std::size_t n, double eps) {
    const double l = log_inv(eps);
    const auto nn = static_cast<double>(n);
    return l / nn + std::sqrt(l / (2.0 * nn));
}

double fluctuation_threshold(double t, double theta, double sigma, std::size_t n, double eps) {
    require_positive(theta, "theta");
    return t * sigma * sigma / theta * fluctuation_factor(n, eps);
}

double martingale_threshold(double t, double theta, double sigma, std::size_t n, double eps) {
    require_positive(theta, "theta");
    return sigma * std::sqrt(2.0 * t * log_inv(eps) / (static_cast<double>(n) * theta));
}

double chi2_log_mgf(double u) {
    if (!(u < 0.5)) {
        throw DomainError("chi2_log_mgf: u must be < 1/2");
    }
    return -u - 0.5 * std::log1p(-2.0 * u);
}

double chi2_log_mgf_bound(double u) {
    if (!(u > -0.5 && u < 0.5)) {
        throw DomainError("chi2_log_mgf_bound: u must lie in (-1/2, 1/2)");
    }
    return u > 0.0 ? u * u / (1.0 - 2.0 * u) : u * u;
}

double mgf_tail_threshold(double v, double c, double x) {
    if (v < 0.0 || c < 0.0 || x < 0.0) {
        throw DomainError("mgf_tail_threshold: arguments must be non-negative");
    }
    return c * x + std::sqrt(2.0 * v * x);
}

double denominator_lower_bound_constant() { return (1.0 + std::exp(-2.0)) / 4.0 - 0.2; }

}  // namespace elastica::theory
