#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dcla {

/// Deterministic random source used everywhere randomness is needed.
///
/// Wraps std::mt19937_64 (bit-reproducible by the standard) but implements
/// its own variate transforms, since the standard distribution objects are
/// not portable across library implementations. Draw order is part of the
/// contract: callers that document a draw sequence get the same stream on
/// every platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1); 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform integer in [0, n); unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t value = engine_();
        while (value >= limit) {
            value = engine_();
        }
        return value % n;
    }

    /// Standard normal via Box-Muller. Consumes two uniforms per call and
    /// discards the sine branch so the stream advances a fixed amount.
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Index sampled from unnormalized nonnegative weights by CDF inversion.
    std::size_t discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        const double target = uniform() * total;
        double cumulative = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            cumulative += weights[i];
            if (target < cumulative) {
                return i;
            }
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    /// Derives an independent child stream; `salt` keeps sibling streams apart.
    Rng split(std::uint64_t salt) {
        return Rng(mix(engine_() ^ (salt * 0x9E3779B97F4A7C15ull)));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace dcla
