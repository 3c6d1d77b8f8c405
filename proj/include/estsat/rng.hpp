#ifndef ESTSAT_RNG_HPP
#define ESTSAT_RNG_HPP

#include <cstdint>
#include <random>

namespace estsat {

// All randomized code in the project draws from mt19937_64, which the
// standard pins down bit-for-bit. Distribution adaptors are hand-rolled
// below because std::uniform_real_distribution et al. are
// implementation-defined and would break cross-toolchain reproducibility.
using Rng = std::mt19937_64;

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

} // namespace estsat

#endif
