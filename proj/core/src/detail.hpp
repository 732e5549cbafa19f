#pragma once

#include <cstddef>
#include <span>

namespace elastica::detail {

// Mean over particles of one time slice [particle][coord], summed in particle
// order. Every module computes Xbar through here so deviations agree bit for bit.
inline void particle_mean(std::span<const double> slice, std::size_t n_particles, std::size_t dim,
                          std::span<double> out) noexcept {
    for (std::size_t j = 0; j < dim; ++j) {
        out[j] = 0.0;
    }
    for (std::size_t i = 0; i < n_particles; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out[j] += slice[i * dim + j];
        }
    }
    const auto n = static_cast<double>(n_particles);
    for (std::size_t j = 0; j < dim; ++j) {
        out[j] /= n;
    }
}

}  // namespace elastica::detail
