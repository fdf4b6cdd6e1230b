#pragma once

#include <cmath>
#include <cstdint>

namespace locfree {

/// Deterministic stream generator used everywhere randomness is needed.
///
/// Core is splitmix64 (Steele/Lea/Vigna). The uniform/normal/poisson
/// transforms are spelled out here instead of using std:: distributions,
/// whose output is implementation-defined; this keeps instances
/// reproducible for a given (spec, seed) across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    /// Standard normal via Box-Muller; one value per call, no caching.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Poisson draw; Knuth multiplication for small means, normal
    /// approximation (rounded, clamped at 0) for large ones.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 64.0) {
            const double limit = std::exp(-mean);
            double prod = 1.0;
            std::uint64_t count = 0;
            do {
                prod *= uniform();
                ++count;
            } while (prod > limit);
            return count - 1;
        }
        const double draw = mean + std::sqrt(mean) * normal();
        return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(draw));
    }

private:
    std::uint64_t state_;
};

/// Mixes values into a fresh stream seed (order-sensitive).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

}  // namespace locfree
