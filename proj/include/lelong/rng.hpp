// Deterministic RNG substreams.
//
// Every randomized routine derives an independent engine from a (seed, stream
// labels...) tuple via splitmix64 mixing, so parallel and serial schedules
// draw identical samples and reruns with the same seed are bit-identical.
// Gaussians use an explicit Box-Muller on 53-bit uniforms rather than
// std::normal_distribution, whose algorithm is implementation-defined.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lelong {

inline constexpr std::uint64_t kDefaultSeed = 1729;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t first, Rest... rest) {
    return mix_seed(splitmix64(seed ^ splitmix64(first)), static_cast<std::uint64_t>(rest)...);
}

// Substream engine for a labelled stream, e.g. substream(seed, annulus, group).
template <typename... Labels>
std::mt19937_64 substream(std::uint64_t seed, Labels... labels) {
    return std::mt19937_64(mix_seed(seed, static_cast<std::uint64_t>(labels)...));
}

// Uniform in [0, 1) with 53 random bits; bit-stable given the engine state.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; discards the second variate for simplicity.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace lelong
