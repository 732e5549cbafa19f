#pragma once

#include <optional>
#include <vector>

#include "elastica/types.hpp"

namespace elastica {

/// Closed-form maximum likelihood estimate of theta.
///
/// theta_hat_raw = cross * gram^{-1} is the unconstrained stationary point and
/// theta_hat its symmetric part. theta_hat_sym_mle solves the stationarity
/// condition restricted to symmetric matrices, A G + G A = B + B^T. No
/// projection onto the positive definite cone is applied.
///
/// Throws SingularGramError when lambda_min(gram) <= 1e-12 * lambda_max(gram).
EstimateResult mle_matrix(const SufficientStats& stats,
                          const std::optional<SymMatrix>& theta_true = std::nullopt);

/// Per-coordinate ratios per_coord_num[j] / per_coord_den[j]; the estimator for
/// diagonal theta. Throws ZeroDenominatorError.
std::vector<double> mle_diagonal(const SufficientStats& stats);

/// The symmetric-restricted maximizer on its own.
SymMatrix mle_symmetric(const SufficientStats& stats);

/// Spectral norm of theta_hat - theta_true.
double spectral_error(const SymMatrix& theta_hat, const SymMatrix& theta_true);

/// Central finite-difference gradient of A -> log_likelihood(bundle, A) over the
/// d(d+1)/2 symmetric coordinates (E_jj, and E_jl + E_lj for j < l), ordered
/// row by row over the upper triangle.
std::vector<double> likelihood_gradient_sym(const TrajectoryBundle& bundle, const SymMatrix& a,
                                            double step);

/// Max-norm of likelihood_gradient_sym at theta_hat with step 1e-5 (1 + ||theta_hat||).
double optimality_gap(const TrajectoryBundle& bundle, const SymMatrix& theta_hat);

}  // namespace elastica
