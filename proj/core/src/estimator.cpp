#include "elastica/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elastica/errors.hpp"
#include "elastica/likelihood.hpp"

namespace elastica {

namespace {

constexpr double kMaxCondition = 1e12;

EigenDecomposition checked_gram_eigen(const SufficientStats& stats) {
    auto eig = sym_eigen(stats.gram);
    const double hi = eig.values.front();
    const double lo = eig.values.back();
    if (!(hi > 0.0) || lo <= hi / kMaxCondition) {
        const double cond = condition_number(eig);
        std::ostringstream msg;
        msg << "Gram matrix is numerically singular (condition " << cond << ")";
        throw SingularGramError(msg.str(), cond);
    }
    return eig;
}

// Solves A G + G A = C for symmetric C in the eigenbasis of G.
SymMatrix solve_lyapunov(const EigenDecomposition& g, const Matrix& c) {
    const Matrix& u = g.vectors;
    Matrix rotated = u.transpose() * c * u;
    const std::size_t d = rotated.rows();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            rotated(i, j) /= g.values[i] + g.values[j];
        }
    }
    return SymMatrix::symmetrize(u * rotated * u.transpose());
}

}  // namespace

EstimateResult mle_matrix(const SufficientStats& stats, const std::optional<SymMatrix>& theta_true) {
    const auto eig = checked_gram_eigen(stats);

    // cross * gram^{-1} = (gram^{-1} cross^T)^T since gram is symmetric.
    Matrix raw = sym_solve(stats.gram, stats.cross.transpose()).transpose();
    SymMatrix theta_hat = SymMatrix::symmetrize(raw);
    SymMatrix sym_mle = solve_lyapunov(eig, stats.cross + stats.cross.transpose());

    std::optional<double> err;
    if (theta_true) {
        err = spectral_error(theta_hat, *theta_true);
    }
    const double min_eig = sym_eigen(theta_hat).values.back();
    return EstimateResult{std::move(theta_hat),     std::move(raw), std::move(sym_mle), mle_diagonal(stats), err,
                          condition_number(eig),   min_eig};
}

std::vector<double> mle_diagonal(const SufficientStats& stats) {
    std::vector<double> out(stats.per_coord_num.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (!(stats.per_coord_den[j] > 0.0)) {
            throw ZeroDenominatorError(j);
        }
        out[j] = stats.per_coord_num[j] / stats.per_coord_den[j];
    }
    return out;
}

SymMatrix mle_symmetric(const SufficientStats& stats) {
    return solve_lyapunov(checked_gram_eigen(stats), stats.cross + stats.cross.transpose());
}

double spectral_error(const SymMatrix& theta_hat, const SymMatrix& theta_true) {
    if (theta_hat.dim() != theta_true.dim()) {
        throw ValidationError("spectral_error: dimension mismatch");
    }
    return spectral_norm(theta_hat - theta_true);
}

std::vector<double> likelihood_gradient_sym(const TrajectoryBundle& bundle, const SymMatrix& a,
                                            double step) {
    const std::size_t d = a.dim();
    std::vector<double> grad;
    grad.reserve(d * (d + 1) / 2);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t l = j; l < d; ++l) {
            Matrix dir(d, d);
            dir(j, l) = 1.0;
            dir(l, j) = 1.0;
            const SymMatrix plus(a.matrix() + step * dir);
            const SymMatrix minus(a.matrix() - step * dir);
            grad.push_back((log_likelihood(bundle, plus) - log_likelihood(bundle, minus)) / (2.0 * step));
        }
    }
    return grad;
}

double optimality_gap(const TrajectoryBundle& bundle, const SymMatrix& theta_hat) {
    const double step = 1e-5 * (1.0 + spectral_norm(theta_hat));
    const auto grad = likelihood_gradient_sym(bundle, theta_hat, step);
    double gap = 0.0;
    for (double g : grad) {
        gap = std::max(gap, std::abs(g));
    }
    return gap;
}

}  // namespace elastica
