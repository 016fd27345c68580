#pragma once

#include <cmath>
#include <cstdint>

namespace crane {

// Counter-based generators. Every draw is a pure function of (seed, counter),
// which makes disturbance noise and weight initialization bit-reproducible
// independent of call order, platform, and standard-library version.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t seeded_stream(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(seed ^ splitmix64(counter));
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(seeded_stream(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform_range(std::uint64_t seed, std::uint64_t counter, double lo, double hi) {
    return lo + (hi - lo) * uniform01(seed, counter);
}

// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
inline double gaussian(std::uint64_t seed, std::uint64_t k) {
    const double u1 = 1.0 - uniform01(seed, 2 * k);  // (0, 1], keeps log finite
    const double u2 = uniform01(seed, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace crane
