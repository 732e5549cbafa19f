#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elastica/types.hpp"

namespace elastica {

/// Interacting paths X and their decoupled OU shadows Y, driven by the same
/// noise increments and started from the same initial states.
struct CoupledBundle {
    TrajectoryBundle interacting;
    TrajectoryBundle decoupled;
};

/// Euler-Maruyama for dX^i = theta (Xbar - X^i) dt + sigma dW^i.
///
/// Particle i draws its initial state and then one d-vector of normals per step
/// from the stream derive_stream_seed(config.seed, 0, i). `initial_states`, when
/// non-empty, replaces the Gaussian draw (N*d values, [particle][coord]).
/// Throws StabilityError when h * theta_max > 0.5.
TrajectoryBundle simulate_interacting(const SystemConfig& config, bool store_noise = false,
                                      std::span<const double> initial_states = {});

/// Independent OU paths dY = -theta Y dt + sigma dW using the exact Gaussian
/// transition in the eigenbasis of theta. Stored noise is the Gaussian
/// innovation of each transition mapped back to the original coordinates.
TrajectoryBundle simulate_ou_exact(const SystemConfig& config, bool store_noise = false,
                                   std::span<const double> initial_states = {});

/// Euler-Maruyama for independent OU paths, dY = -theta Y dt + sigma dW. Uses
/// the same streams as simulate_interacting, so for equal configs both see the
/// same noise. Throws StabilityError when h * theta_max > 0.5.
TrajectoryBundle simulate_ou_euler(const SystemConfig& config, bool store_noise = false,
                                   std::span<const double> initial_states = {});

/// X by Euler-Maruyama and Y by Euler-Maruyama on dY = -theta Y dt + sigma dW, both
/// from the same noise and initial states. The X bundle is bit-identical to
/// simulate_interacting(config, true).
CoupledBundle simulate_coupled(const SystemConfig& config, std::span<const double> initial_states = {});

/// Xbar_k, averaged over particles in index order.
Path mean_process(const TrajectoryBundle& bundle);

/// Per-coordinate sum of squared increments.
std::vector<double> empirical_quadratic_variation(const Path& path);

/// The (Nd)x(Nd) centering projection I - (1/N) 11^T (x) I_d. Testing scale only: Nd <= 4096.
SymMatrix interaction_matrix(std::size_t n_particles, std::size_t dim);

/// max over i, k, j of |Delta^i_k - Delta^0_k| with Delta^i = Xbar - X^i + Y^i.
double coupling_deviation(const CoupledBundle& coupled);

/// Message when h exceeds the recommended 0.01 / theta_max, nullopt otherwise.
std::optional<std::string> step_rule_warning(const SystemConfig& config);

/// Smallest n_steps honoring h <= 0.01 / theta_max.
std::size_t default_step_count(const SymMatrix& theta, double t_final);

}  // namespace elastica
