#pragma once

#include <cstddef>

#include "elastica/types.hpp"

namespace elastica {

// Girsanov log-likelihood of a drift A for the observed system. All functions
// work on the sigma-rescaled process X / sigma (no rescaling when sigma == 0),
// with left-endpoint sums for both the ds- and the dX-integrals.

/// sum_i [ -1/2 sum_k h |A D_ik|^2 + sum_k (A D_ik) . (X_{k+1} - X_k) ],  D_ik = Xbar_k - X^i_k.
double log_likelihood(const TrajectoryBundle& bundle, const SymMatrix& a);

/// Same sums for a general (not necessarily symmetric) d x d matrix.
double log_likelihood_general(const TrajectoryBundle& bundle, const Matrix& a);

/// N sum_k h tr[M_k (-1/2 A A^T + A theta)] + sum_i sum_k (A D_ik) . dW_ik, with the
/// Brownian increments taken from the bundle's stored noise.
/// Throws MissingNoiseError when the bundle has none.
double log_likelihood_trace_form(const TrajectoryBundle& bundle, const SymMatrix& a,
                                 const SymMatrix& theta_true);

/// M_k = (1/N) sum_i D_ik D_ik^T at one grid index (not rescaled).
SymMatrix mean_field_covariance(const TrajectoryBundle& bundle, std::size_t step);

SufficientStats sufficient_stats(const TrajectoryBundle& bundle);

/// The likelihood reassembled from the statistics alone:
/// -1/2 tr(A G A^T) + <A, B>_F.
double log_likelihood_from_stats(const SufficientStats& stats, const Matrix& a);

}  // namespace elastica
