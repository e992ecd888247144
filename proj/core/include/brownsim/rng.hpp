#ifndef BROWNSIM_RNG_HPP
#define BROWNSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace brownsim {

// All randomness flows through mt19937_64 plus the helpers below, none of
// which depend on implementation-defined std distributions, so identical
// seeds give identical streams on every platform.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from (base seed, stream label, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ splitmix64(stream)) ^ index);
}

// Uniform draw in [0, 1).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller normal draw.
inline double normal(Rng& rng, double mean, double stddev) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

}  // namespace brownsim

#endif
