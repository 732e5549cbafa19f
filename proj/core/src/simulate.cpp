#include "elastica/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "elastica/errors.hpp"
#include "elastica/random.hpp"

namespace elastica {

namespace {

constexpr double kHardStepLimit = 0.5;
constexpr double kRecommendedStep = 0.01;

std::vector<NormalStream> particle_streams(const SystemConfig& config) {
    std::vector<NormalStream> streams;
    streams.reserve(config.n_particles);
    for (std::size_t i = 0; i < config.n_particles; ++i) {
        streams.emplace_back(derive_stream_seed(config.seed, 0, i));
    }
    return streams;
}

// Writes the initial slice into `states` and consumes the initial draws.
void initialize(const SystemConfig& config, std::span<const double> initial_states,
                std::vector<NormalStream>& streams, std::span<double> slice) {
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    if (!initial_states.empty()) {
        if (initial_states.size() != n * d) {
            throw ValidationError("initial_states has " + std::to_string(initial_states.size()) +
                                  " values, expected " + std::to_string(n * d));
        }
        std::copy(initial_states.begin(), initial_states.end(), slice.begin());
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            slice[i * d + j] = std::sqrt(config.init_variances[j]) * streams[i]();
        }
    }
}

void check_step(const SystemConfig& config) {
    const double h_theta = config.step_size() * config.theta_max();
    if (h_theta > kHardStepLimit) {
        std::ostringstream msg;
        msg << "explicit Euler step too large: h * theta_max = " << h_theta << " > " << kHardStepLimit;
        throw StabilityError(msg.str());
    }
}

void check_interacting(const SystemConfig& config) {
    config.validate();
    if (config.n_particles < 2) {
        throw ValidationError("the interacting system needs n_particles >= 2");
    }
    check_step(config);
}

// One Euler-Maruyama run of the interacting system. When `shadow` is non-null
// it receives the OU paths driven by the same noise.
TrajectoryBundle run_interacting(const SystemConfig& config, bool store_noise,
                                 std::span<const double> initial_states, std::vector<double>* shadow) {
    check_interacting(config);
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    const std::size_t per_step = n * d;
    const double h = config.step_size();
    const double noise_scale = config.sigma * std::sqrt(h);
    const Matrix& theta = config.theta.matrix();

    auto streams = particle_streams(config);
    std::vector<double> states((config.n_steps + 1) * per_step);
    std::vector<double> noise;
    if (store_noise) {
        noise.resize(config.n_steps * per_step);
    }
    initialize(config, initial_states, streams, std::span(states).first(per_step));
    if (shadow != nullptr) {
        shadow->assign(states.size(), 0.0);
        std::copy_n(states.begin(), per_step, shadow->begin());
    }

    std::vector<double> mean(d);
    std::vector<double> dev(d);
    std::vector<double> increment(d);
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        const double* cur = states.data() + k * per_step;
        double* next = states.data() + (k + 1) * per_step;
        detail::particle_mean(std::span(cur, per_step), n, d, mean);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                dev[j] = mean[j] - cur[i * d + j];
                increment[j] = noise_scale * streams[i]();
            }
            for (std::size_t j = 0; j < d; ++j) {
                double drift = 0.0;
                for (std::size_t l = 0; l < d; ++l) {
                    drift += theta(j, l) * dev[l];
                }
                next[i * d + j] = cur[i * d + j] + h * drift + increment[j];
            }
            if (store_noise) {
                std::copy(increment.begin(), increment.end(), noise.begin() + k * per_step + i * d);
            }
            if (shadow != nullptr) {
                const double* y = shadow->data() + k * per_step + i * d;
                double* y_next = shadow->data() + (k + 1) * per_step + i * d;
                for (std::size_t j = 0; j < d; ++j) {
                    double drift = 0.0;
                    for (std::size_t l = 0; l < d; ++l) {
                        drift -= theta(j, l) * y[l];
                    }
                    y_next[j] = y[j] + h * drift + increment[j];
                }
            }
        }
    }
    std::optional<std::vector<double>> stored;
    if (store_noise) {
        stored = std::move(noise);
    }
    return TrajectoryBundle(config, std::move(states), std::move(stored));
}

}  // namespace

TrajectoryBundle simulate_interacting(const SystemConfig& config, bool store_noise,
                                      std::span<const double> initial_states) {
    return run_interacting(config, store_noise, initial_states, nullptr);
}

CoupledBundle simulate_coupled(const SystemConfig& config, std::span<const double> initial_states) {
    std::vector<double> shadow;
    TrajectoryBundle x = run_interacting(config, true, initial_states, &shadow);
    std::vector<double> noise(x.noise_increments().begin(), x.noise_increments().end());
    TrajectoryBundle y(config, std::move(shadow), std::move(noise));
    return CoupledBundle{std::move(x), std::move(y)};
}

TrajectoryBundle simulate_ou_euler(const SystemConfig& config, bool store_noise,
                                   std::span<const double> initial_states) {
    config.validate();
    check_step(config);
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    const std::size_t per_step = n * d;
    const double h = config.step_size();
    const double noise_scale = config.sigma * std::sqrt(h);
    const Matrix& theta = config.theta.matrix();

    auto streams = particle_streams(config);
    std::vector<double> states((config.n_steps + 1) * per_step);
    std::vector<double> noise;
    if (store_noise) {
        noise.resize(config.n_steps * per_step);
    }
    initialize(config, initial_states, streams, std::span(states).first(per_step));

    std::vector<double> increment(d);
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* y = states.data() + k * per_step + i * d;
            double* y_next = states.data() + (k + 1) * per_step + i * d;
            for (std::size_t j = 0; j < d; ++j) {
                increment[j] = noise_scale * streams[i]();
            }
            for (std::size_t j = 0; j < d; ++j) {
                double drift = 0.0;
                for (std::size_t l = 0; l < d; ++l) {
                    drift -= theta(j, l) * y[l];
                }
                y_next[j] = y[j] + h * drift + increment[j];
            }
            if (store_noise) {
                std::copy(increment.begin(), increment.end(), noise.begin() + k * per_step + i * d);
            }
        }
    }
    std::optional<std::vector<double>> stored;
    if (store_noise) {
        stored = std::move(noise);
    }
    return TrajectoryBundle(config, std::move(states), std::move(stored));
}

TrajectoryBundle simulate_ou_exact(const SystemConfig& config, bool store_noise,
                                   std::span<const double> initial_states) {
    config.validate();
    const std::size_t n = config.n_particles;
    const std::size_t d = config.dim;
    const std::size_t per_step = n * d;
    const double h = config.step_size();

    const auto eig = sym_eigen(config.theta);
    const Matrix& v = eig.vectors;
    std::vector<double> decay(d);
    std::vector<double> innovation_sd(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double lambda = eig.values[j];
        decay[j] = std::exp(-lambda * h);
        innovation_sd[j] = config.sigma * std::sqrt(-std::expm1(-2.0 * lambda * h) / (2.0 * lambda));
    }

    auto streams = particle_streams(config);
    std::vector<double> states((config.n_steps + 1) * per_step);
    std::vector<double> noise;
    if (store_noise) {
        noise.resize(config.n_steps * per_step);
    }
    initialize(config, initial_states, streams, std::span(states).first(per_step));

    // Eigen-coordinates y = V^T x, advanced exactly and mapped back each step.
    std::vector<double> eigen_coords(per_step, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < d; ++l) {
                s += v(l, j) * states[i * d + l];
            }
            eigen_coords[i * d + j] = s;
        }
    }

    std::vector<double> eta(d);
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        double* next = states.data() + (k + 1) * per_step;
        for (std::size_t i = 0; i < n; ++i) {
            double* y = eigen_coords.data() + i * d;
            for (std::size_t j = 0; j < d; ++j) {
                eta[j] = innovation_sd[j] * streams[i]();
                y[j] = decay[j] * y[j] + eta[j];
            }
            for (std::size_t l = 0; l < d; ++l) {
                double x = 0.0;
                double e = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    x += v(l, j) * y[j];
                    e += v(l, j) * eta[j];
                }
                next[i * d + l] = x;
                if (store_noise) {
                    noise[k * per_step + i * d + l] = e;
                }
            }
        }
    }
    std::optional<std::vector<double>> stored;
    if (store_noise) {
        stored = std::move(noise);
    }
    return TrajectoryBundle(config, std::move(states), std::move(stored));
}

Path mean_process(const TrajectoryBundle& bundle) {
    const std::size_t n = bundle.n_particles();
    const std::size_t d = bundle.dim();
    const std::size_t per_step = n * d;
    Path path{bundle.n_times(), d, std::vector<double>(bundle.n_times() * d)};
    for (std::size_t k = 0; k < bundle.n_times(); ++k) {
        detail::particle_mean(bundle.states().subspan(k * per_step, per_step), n, d,
                              std::span(path.values).subspan(k * d, d));
    }
    return path;
}

std::vector<double> empirical_quadratic_variation(const Path& path) {
    if (path.n_times < 2) {
        throw ValidationError("quadratic variation needs at least 2 time points");
    }
    std::vector<double> qv(path.dim, 0.0);
    for (std::size_t k = 0; k + 1 < path.n_times; ++k) {
        const auto a = path.at(k);
        const auto b = path.at(k + 1);
        for (std::size_t j = 0; j < path.dim; ++j) {
            const double inc = b[j] - a[j];
            qv[j] += inc * inc;
        }
    }
    return qv;
}

SymMatrix interaction_matrix(std::size_t n_particles, std::size_t dim) {
    constexpr std::size_t kMaxSize = 4096;
    if (n_particles < 1 || dim < 1) {
        throw ValidationError("interaction_matrix needs N >= 1 and d >= 1");
    }
    const std::size_t size = n_particles * dim;
    if (size > kMaxSize) {
        throw ValidationError("interaction_matrix size " + std::to_string(size) + " exceeds " +
                              std::to_string(kMaxSize));
    }
    const auto nn = static_cast<double>(n_particles);
    const double diag = (nn - 1.0) / nn;
    const double off = -1.0 / nn;
    Matrix h(size, size);
    for (std::size_t a = 0; a < n_particles; ++a) {
        for (std::size_t b = 0; b < n_particles; ++b) {
            const double v = (a == b) ? diag : off;
            for (std::size_t j = 0; j < dim; ++j) {
                h(a * dim + j, b * dim + j) = v;
            }
        }
    }
    return SymMatrix(std::move(h));
}

double coupling_deviation(const CoupledBundle& coupled) {
    const auto& x = coupled.interacting;
    const auto& y = coupled.decoupled;
    const std::size_t n = x.n_particles();
    const std::size_t d = x.dim();
    if (y.n_particles() != n || y.dim() != d || y.n_times() != x.n_times()) {
        throw ValidationError("coupled bundles have mismatched shapes");
    }
    const Path mean = mean_process(x);
    double worst = 0.0;
    for (std::size_t k = 0; k < x.n_times(); ++k) {
        const auto m = mean.at(k);
        const auto x0 = x.state(k, 0);
        const auto y0 = y.state(k, 0);
        for (std::size_t i = 1; i < n; ++i) {
            const auto xi = x.state(k, i);
            const auto yi = y.state(k, i);
            for (std::size_t j = 0; j < d; ++j) {
                const double delta_i = m[j] - xi[j] + yi[j];
                const double delta_0 = m[j] - x0[j] + y0[j];
                worst = std::max(worst, std::abs(delta_i - delta_0));
            }
        }
    }
    return worst;
}

std::optional<std::string> step_rule_warning(const SystemConfig& config) {
    const double h_theta = config.step_size() * config.theta_max();
    if (h_theta <= kRecommendedStep) {
        return std::nullopt;
    }
    std::ostringstream msg;
    msg << "step size h = " << config.step_size() << " gives h * theta_max = " << h_theta
        << " above the recommended " << kRecommendedStep << "; discretization bias may be visible";
    return msg.str();
}

std::size_t default_step_count(const SymMatrix& theta, double t_final) {
    const double theta_max = sym_eigen(theta).values.front();
    const double steps = std::ceil(t_final * theta_max / kRecommendedStep - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

}  // namespace elastica
