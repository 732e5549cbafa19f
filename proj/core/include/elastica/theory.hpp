#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elastica/types.hpp"

namespace elastica::theory {

struct OuMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance at time t of dY = -theta Y dt + sigma dW with Var(Y_0) = tau2:
/// variance = [sigma^2 - (sigma^2 - 2 theta tau2) e^{-2 theta t}] / (2 theta).
OuMoments ou_moments(double theta, double sigma, double tau2, double t);

/// 24 sigma sqrt(theta1) sqrt(2 d log(d/eps) / (N t)), with the hypotheses
/// N >= 400 and eps in [e^{-N/400}, 1) enforced (PreconditionError).
/// t >= 1/theta_d is left to theorem_preconditions().
double rate_bound(double sigma, double theta1, std::size_t d, std::size_t n, double t, double eps);

/// The same expression with no hypothesis checks, for regimes the theorem does not cover.
double rate_bound_formula(double sigma, double theta1, std::size_t d, std::size_t n, double t, double eps);

enum class Hypothesis { HorizonTooShort, TooFewParticles, EpsOutOfRange };

struct Violation {
    Hypothesis which;
    std::string message;
};

/// Hypotheses of the rate theorem that `config` with failure level `eps` violates;
/// empty iff t_final >= 1/theta_min, N >= 400 and eps in [e^{-N/400}, 1).
std::vector<Violation> theorem_preconditions(const SystemConfig& config, double eps);

struct DecouplingConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c = 0.0;
    double eps = 0.0;
    std::size_t n = 0;
};

/// C1 = 1/(2N) + L/N + sqrt(L/2)/N, C2 = 1/2 + L/N + sqrt(L/(2N)), C = sqrt(C1 (2 C1 + 8 C2)),
/// with L = log(1/eps). Requires eps in (0, 1) and n >= 1.
DecouplingConstants decoupling_constants(double eps, std::size_t n);

/// L/N + sqrt(L/(2N)), the bracket of the fluctuation threshold.
double fluctuation_factor(std::size_t n, double eps);

/// (t sigma^2 / theta) (L/N + sqrt(L/(2N))): deviation level of the time-integrated,
/// centered mean square of N independent OU paths.
double fluctuation_threshold(double t, double theta, double sigma, std::size_t n, double eps);

/// sigma sqrt(2 t L / (N theta)): deviation level of the averaged Ito integral of
/// OU paths against their own noise.
double martingale_threshold(double t, double theta, double sigma, std::size_t n, double eps);

/// phi(u) = -u - log(1 - 2u) / 2, the log-MGF of Z^2 - 1. Throws DomainError for u >= 1/2.
double chi2_log_mgf(double u);

/// u^2 / (1 - 2u) on (0, 1/2), u^2 on (-1/2, 0], the upper bounds phi obeys.
double chi2_log_mgf_bound(double u);

/// c x + sqrt(2 v x): tail level exceeded with probability at most e^{-x}
/// when log E e^{uZ} <= v u^2 / (1 - c u).
double mgf_tail_threshold(double v, double c, double x);

/// (1 + e^{-2}) / 4 - 0.2, the constant of the denominator lower bound; must be >= 1/12.
double denominator_lower_bound_constant();

}  // namespace elastica::theory
