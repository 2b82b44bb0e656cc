#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "biphoton/errors.hpp"

namespace biphoton::rng {

// splitmix64; used to derive independent per-record streams from
// (seed, index) so simulated datasets are order-independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                 std::uint64_t stream = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(index)) ^ splitmix64(stream + 0x51ed2701));
}

// Uniform in [0, 1). The engine is fully specified by the standard, and the
// mapping below avoids std::uniform_real_distribution, whose output is
// implementation-defined; together they make every draw reproducible.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Poisson sampler: sequential inversion for small means, Hormann's PTRS
// transformed rejection for large ones. Unlike std::poisson_distribution
// the algorithm is pinned here, so fixed seeds give identical counts on
// every platform.
inline std::uint64_t poisson(std::mt19937_64& gen, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw error("poisson: mean must be finite and non-negative");
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        double p = std::exp(-mean);
        double s = p;
        double u = uniform01(gen);
        std::uint64_t k = 0;
        while (u > s) {
            ++k;
            p *= mean / static_cast<double>(k);
            s += p;
            if (k > 2000) break; // cannot happen for mean < 10; guards NaN loops
        }
        return k;
    }

    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        double u = uniform01(gen) - 0.5;
        double v = uniform01(gen);
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

} // namespace biphoton::rng
