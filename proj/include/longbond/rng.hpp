/**
 * @file rng.hpp
 * @brief Per-path seeded RNG so path i is reproducible independently of batch size
 */

#pragma once

#include <cstdint>
#include <random>

#include "longbond/math.hpp"

namespace longbond {

/// SplitMix64 finalizer; decorrelates (seed, path index) into an engine seed
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Gaussian stream for one Monte Carlo path.
///
/// Each path owns an engine seeded from (seed, path_index), so an ensemble
/// is reproducible no matter how paths are batched across threads, and two
/// calls with the same seed share paths (common random numbers for free).
class PathRng {
    std::mt19937_64 engine_;

public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : engine_(splitmix64(seed ^ splitmix64(path_index + 0x51ed2700a1b4cf39ull))) {}

    /// Uniform draw in the open interval (0,1); 53-bit mantissa, never 0 or 1
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF (see math.hpp for why)
    double gaussian() { return normal_quantile(uniform()); }
};

}  // namespace longbond
