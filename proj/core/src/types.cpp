#include "elastica/types.hpp"

#include <cmath>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

void SystemConfig::validate() const {
    if (n_particles < 1) {
        throw ValidationError("n_particles must be >= 1");
    }
    if (dim < 1) {
        throw ValidationError("dim must be >= 1");
    }
    if (theta.dim() != dim) {
        throw ValidationError("theta is " + std::to_string(theta.dim()) + "x" + std::to_string(theta.dim()) +
                              " but dim is " + std::to_string(dim));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and non-negative");
    }
    if (init_variances.size() != dim) {
        throw ValidationError("init_variances has length " + std::to_string(init_variances.size()) +
                              ", expected " + std::to_string(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) {
        if (!(init_variances[j] >= 0.0) || !std::isfinite(init_variances[j])) {
            throw ValidationError("init_variances[" + std::to_string(j) + "] must be finite and non-negative");
        }
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw ValidationError("t_final must be positive");
    }
    if (n_steps < 1) {
        throw ValidationError("n_steps must be >= 1");
    }
    if (!(step_size() > 0.0)) {
        throw ValidationError("step size underflows to zero");
    }
    if (!(theta_min() > 0.0)) {
        throw ValidationError("theta must be positive definite (smallest eigenvalue " +
                              std::to_string(theta_min()) + ")");
    }
}

double SystemConfig::theta_max() const { return sym_eigen(theta).values.front(); }
double SystemConfig::theta_min() const { return sym_eigen(theta).values.back(); }

std::vector<double> TrajectoryBundle::make_time_grid(double t_final, std::size_t n_steps) {
    std::vector<double> times(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        times[k] = t_final * static_cast<double>(k) / static_cast<double>(n_steps);
    }
    return times;
}

TrajectoryBundle::TrajectoryBundle(SystemConfig config, std::vector<double> states,
                                   std::optional<std::vector<double>> noise_increments)
    : config_(std::move(config)),
      times_(make_time_grid(config_.t_final, config_.n_steps)),
      states_(std::move(states)),
      noise_(std::move(noise_increments)) {
    config_.validate();
    const std::size_t per_step = config_.n_particles * config_.dim;
    if (states_.size() != (config_.n_steps + 1) * per_step) {
        throw ValidationError("states has " + std::to_string(states_.size()) + " entries, expected " +
                              std::to_string((config_.n_steps + 1) * per_step));
    }
    if (noise_ && noise_->size() != config_.n_steps * per_step) {
        throw ValidationError("noise_increments has " + std::to_string(noise_->size()) + " entries, expected " +
                              std::to_string(config_.n_steps * per_step));
    }
}

std::span<const double> TrajectoryBundle::noise_increments() const {
    if (!noise_) {
        throw MissingNoiseError();
    }
    return *noise_;
}

}  // namespace elastica
