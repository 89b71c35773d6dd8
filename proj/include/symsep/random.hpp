#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace symsep {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; mixes (seed, index) into an independent stream seed
/// so that sample i of a campaign does not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double standard_normal(Rng& rng) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

/// Flat Dirichlet(1, ..., 1): normalized exponential draws.
inline std::vector<double> dirichlet_flat(std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    double sum = 0.0;
    for (auto& x : out) {
        x = -std::log1p(-uniform01(rng));
        sum += x;
    }
    for (auto& x : out) x /= sum;
    return out;
}

}  // namespace symsep
