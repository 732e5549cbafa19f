#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elastica/linalg.hpp"

namespace elastica {

/// One stochastic system: N particles in R^d pulled toward their mean with
/// stiffness theta, additive noise sigma, i.i.d. N(0, diag(init_variances))
/// initial states, observed on a uniform grid of n_steps steps over [0, t_final].
struct SystemConfig {
    std::size_t n_particles = 2;
    std::size_t dim = 1;
    SymMatrix theta = SymMatrix::identity(1);
    double sigma = 1.0;
    std::vector<double> init_variances = {0.0};
    double t_final = 1.0;
    std::size_t n_steps = 100;
    std::uint64_t seed = 0;

    /// Throws ValidationError unless every field is consistent and theta is
    /// positive definite. sigma = 0 and N = 1 are accepted here; operations
    /// that need N >= 2 check it themselves.
    void validate() const;

    [[nodiscard]] double step_size() const noexcept {
        return t_final / static_cast<double>(n_steps);
    }
    /// Largest and smallest eigenvalue of theta.
    [[nodiscard]] double theta_max() const;
    [[nodiscard]] double theta_min() const;
};

/// Particle states on the time grid, flat in [step][particle][coord] order.
class TrajectoryBundle {
public:
    TrajectoryBundle(SystemConfig config, std::vector<double> states,
                     std::optional<std::vector<double>> noise_increments = std::nullopt);

    [[nodiscard]] const SystemConfig& config() const noexcept { return config_; }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] std::span<const double> states() const noexcept { return states_; }
    [[nodiscard]] bool has_noise() const noexcept { return noise_.has_value(); }
    /// Throws MissingNoiseError when absent.
    [[nodiscard]] std::span<const double> noise_increments() const;

    [[nodiscard]] std::size_t n_times() const noexcept { return times_.size(); }
    [[nodiscard]] std::size_t n_steps() const noexcept { return times_.size() - 1; }
    [[nodiscard]] std::size_t n_particles() const noexcept { return config_.n_particles; }
    [[nodiscard]] std::size_t dim() const noexcept { return config_.dim; }

    [[nodiscard]] std::span<const double> state(std::size_t step, std::size_t particle) const noexcept {
        return std::span<const double>(states_).subspan((step * n_particles() + particle) * dim(), dim());
    }
    /// Noise added on the move from `step` to `step + 1`.
    [[nodiscard]] std::span<const double> noise(std::size_t step, std::size_t particle) const {
        return noise_increments().subspan((step * n_particles() + particle) * dim(), dim());
    }

    /// Uniform grid 0, h, ..., t_final with exactly n_steps + 1 points.
    static std::vector<double> make_time_grid(double t_final, std::size_t n_steps);

private:
    SystemConfig config_;
    std::vector<double> times_;
    std::vector<double> states_;
    std::optional<std::vector<double>> noise_;
};

/// A single d-dimensional path, flat in [step][coord] order.
struct Path {
    std::size_t n_times = 0;
    std::size_t dim = 0;
    std::vector<double> values;

    [[nodiscard]] std::span<const double> at(std::size_t step) const noexcept {
        return std::span<const double>(values).subspan(step * dim, dim);
    }
};

/// Everything the maximum likelihood estimator needs, already integrated in time.
/// Computed on the sigma-rescaled process.
struct SufficientStats {
    SymMatrix gram;                     // sum_k h sum_i D D^T
    Matrix cross;                       // sum_k sum_i dX D^T
    std::vector<double> per_coord_num;  // (1/N) sum_k sum_i D_j dX_j
    std::vector<double> per_coord_den;  // (1/N) sum_k h sum_i D_j^2
    double t_final = 0.0;
    std::size_t n_particles = 0;
};

struct EstimateResult {
    SymMatrix theta_hat;          // (raw + raw^T) / 2
    Matrix theta_hat_raw;         // cross * gram^{-1}
    SymMatrix theta_hat_sym_mle;  // maximizer over symmetric matrices
    std::vector<double> diag_estimates;
    std::optional<double> spectral_error;
    double gram_condition = 0.0;
    double min_eigenvalue = 0.0;  // of theta_hat; negative means outside the PD cone
};

}  // namespace elastica
