// Deterministic, splittable random streams.
//
// Every Monte-Carlo repetition r draws from rng_stream(master_seed, r).
// Streams derived from the same master seed are statistically independent
// SplitMix-style sequences; the mapping (seed, index) -> sequence is fixed
// by this file alone, so all experiment output is byte-reproducible across
// platforms, runs, and thread counts.

#pragma once

#include <bit>
#include <cstdint>
#include <cmath>
#include <numbers>

#include "genbound/errors.hpp"

namespace genbound {

namespace detail {

// Stafford variant-13 finalizer: a high-quality 64-bit bijective mixer.
inline std::uint64_t mix13(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derive a per-stream additive constant: odd, with enough bit diversity
// that neighbouring stream indices do not produce correlated sequences.
inline std::uint64_t derive_gamma(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t g = mix13(master_seed ^ mix13(stream * 0x9e3779b97f4a7c15ull +
                                                0x632be59bd9b4e019ull));
    g |= 1ull;
    if (std::popcount(g ^ (g >> 1)) < 24) g ^= 0xaaaaaaaaaaaaaaaaull;
    return g;
}

} // namespace detail

class rng_stream {
public:
    rng_stream(std::uint64_t master_seed, std::uint64_t stream_index)
        : state_(detail::mix13(master_seed + 0x9e3779b97f4a7c15ull * (stream_index + 1))),
          gamma_(detail::derive_gamma(master_seed, stream_index)) {}

    std::uint64_t next_u64() {
        state_ += gamma_;
        return detail::mix13(state_);
    }

    // Uniform on the open interval (0, 1): 53-bit grid offset by half a step,
    // so 0 and 1 are unreachable (log/Box-Muller safe).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; generates pairs, caches the second.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw invalid_input_error("uniform_below: bound must be > 0");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_;
    std::uint64_t gamma_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace genbound
