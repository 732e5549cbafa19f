#pragma once

#include <cstdint>

namespace elastica {

/// SplitMix64 (Steele, Lea & Flood): 64-bit state, one add and a finalizer per draw.
/// Cheap to construct, so every (replicate, particle) pair gets its own stream.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of the stream owned by (replicate, particle) under a master seed.
/// Pure and platform independent: only integer adds, xors and multiplies.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t replicate,
                                           std::uint64_t particle) noexcept {
    std::uint64_t z = SplitMix64::mix(master + SplitMix64::kGamma);
    z = SplitMix64::mix(z ^ (replicate * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    z = SplitMix64::mix(z ^ (particle * 0xAEF17502108EF2D9ULL + 0x2545F4914F6CDD1DULL));
    return z;
}

/// Standard normal variates by Marsaglia's polar method; the second variate of
/// each accepted pair is cached.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept : rng_(seed) {}

    double operator()() noexcept;

private:
    SplitMix64 rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace elastica
