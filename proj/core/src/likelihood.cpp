#include "elastica/likelihood.hpp"

#include <string>
#include <vector>

#include "detail.hpp"
#include "elastica/errors.hpp"

namespace elastica {

namespace {

double rescale_factor(const SystemConfig& config) {
    return config.sigma > 0.0 ? 1.0 / (config.sigma * config.sigma) : 1.0;
}

void require_dim(const TrajectoryBundle& bundle, std::size_t rows, std::size_t cols) {
    if (rows != bundle.dim() || cols != bundle.dim()) {
        throw ValidationError("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                              " but the bundle has dim " + std::to_string(bundle.dim()));
    }
}

// Calls visit(k, i, dev, next_minus_cur) for every step k < n_steps and particle i.
template <typename Visit>
void for_each_deviation(const TrajectoryBundle& bundle, Visit&& visit) {
    const std::size_t n = bundle.n_particles();
    const std::size_t d = bundle.dim();
    const std::size_t per_step = n * d;
    std::vector<double> mean(d);
    std::vector<double> dev(d);
    std::vector<double> inc(d);
    const auto states = bundle.states();
    for (std::size_t k = 0; k < bundle.n_steps(); ++k) {
        const auto cur = states.subspan(k * per_step, per_step);
        const auto next = states.subspan((k + 1) * per_step, per_step);
        detail::particle_mean(cur, n, d, mean);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                dev[j] = mean[j] - cur[i * d + j];
                inc[j] = next[i * d + j] - cur[i * d + j];
            }
            visit(k, i, std::span<const double>(dev), std::span<const double>(inc));
        }
    }
}

}  // namespace

double log_likelihood_general(const TrajectoryBundle& bundle, const Matrix& a) {
    require_dim(bundle, a.rows(), a.cols());
    const std::size_t d = bundle.dim();
    const double h = bundle.config().step_size();
    std::vector<double> ad(d);
    double quad = 0.0;
    double ito = 0.0;
    for_each_deviation(bundle, [&](std::size_t, std::size_t, std::span<const double> dev,
                                   std::span<const double> inc) {
        for (std::size_t r = 0; r < d; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                s += a(r, c) * dev[c];
            }
            ad[r] = s;
        }
        for (std::size_t r = 0; r < d; ++r) {
            quad += h * ad[r] * ad[r];
            ito += ad[r] * inc[r];
        }
    });
    return (-0.5 * quad + ito) * rescale_factor(bundle.config());
}

double log_likelihood(const TrajectoryBundle& bundle, const SymMatrix& a) {
    return log_likelihood_general(bundle, a.matrix());
}

double log_likelihood_trace_form(const TrajectoryBundle& bundle, const SymMatrix& a,
                                 const SymMatrix& theta_true) {
    require_dim(bundle, a.dim(), a.dim());
    require_dim(bundle, theta_true.dim(), theta_true.dim());
    const auto noise = bundle.noise_increments();
    const std::size_t n = bundle.n_particles();
    const std::size_t d = bundle.dim();
    const double h = bundle.config().step_size();

    // -1/2 A A^T + A theta, contracted against M_k below.
    const Matrix& am = a.matrix();
    const Matrix weight = -0.5 * (am * am.transpose()) + am * theta_true.matrix();

    double trace_term = 0.0;
    for (std::size_t k = 0; k < bundle.n_steps(); ++k) {
        const SymMatrix m = mean_field_covariance(bundle, k);
        trace_term += h * (m.matrix() * weight).trace();
    }
    trace_term *= static_cast<double>(n);

    double ito = 0.0;
    for_each_deviation(bundle, [&](std::size_t k, std::size_t i, std::span<const double> dev,
                                   std::span<const double>) {
        const auto dw = noise.subspan((k * n + i) * d, d);
        for (std::size_t r = 0; r < d; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                s += am(r, c) * dev[c];
            }
            ito += s * dw[r];
        }
    });
    return (trace_term + ito) * rescale_factor(bundle.config());
}

SymMatrix mean_field_covariance(const TrajectoryBundle& bundle, std::size_t step) {
    if (step >= bundle.n_times()) {
        throw ValidationError("step " + std::to_string(step) + " out of range");
    }
    const std::size_t n = bundle.n_particles();
    const std::size_t d = bundle.dim();
    const auto slice = bundle.states().subspan(step * n * d, n * d);
    std::vector<double> mean(d);
    detail::particle_mean(slice, n, d, mean);
    Matrix m(d, d);
    std::vector<double> dev(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            dev[j] = mean[j] - slice[i * d + j];
        }
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = r; c < d; ++c) {
                m(r, c) += dev[r] * dev[c];
            }
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r; c < d; ++c) {
            m(r, c) /= static_cast<double>(n);
            m(c, r) = m(r, c);
        }
    }
    return SymMatrix(std::move(m));
}

SufficientStats sufficient_stats(const TrajectoryBundle& bundle) {
    const std::size_t d = bundle.dim();
    const double h = bundle.config().step_size();
    const double scale = rescale_factor(bundle.config());
    const auto nn = static_cast<double>(bundle.n_particles());

    Matrix gram_upper(d, d);
    Matrix cross(d, d);
    for_each_deviation(bundle, [&](std::size_t, std::size_t, std::span<const double> dev,
                                   std::span<const double> inc) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                cross(r, c) += inc[r] * dev[c];
            }
            for (std::size_t c = r; c < d; ++c) {
                gram_upper(r, c) += h * dev[r] * dev[c];
            }
        }
    });

    Matrix gram(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r; c < d; ++c) {
            gram(r, c) = gram_upper(r, c) * scale;
            gram(c, r) = gram(r, c);
        }
    }
    cross *= scale;

    SufficientStats stats{SymMatrix(std::move(gram)), std::move(cross), std::vector<double>(d),
                          std::vector<double>(d), bundle.config().t_final, bundle.n_particles()};
    for (std::size_t j = 0; j < d; ++j) {
        stats.per_coord_num[j] = stats.cross(j, j) / nn;
        stats.per_coord_den[j] = stats.gram(j, j) / nn;
    }
    return stats;
}

double log_likelihood_from_stats(const SufficientStats& stats, const Matrix& a) {
    const Matrix& g = stats.gram.matrix();
    if (a.rows() != g.rows() || a.cols() != g.cols()) {
        throw ValidationError("matrix does not match the statistics' dimension");
    }
    return -0.5 * (a * g * a.transpose()).trace() + frobenius_dot(a, stats.cross);
}

}  // namespace elastica
