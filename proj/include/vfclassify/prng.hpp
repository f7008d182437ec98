#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vfc {

/// splitmix64 generator (Steele, Lea, Flood). 64 bits of state, one
/// multiply-xorshift pipeline per draw. Every random decision in this
/// project flows through this generator so that runs are reproducible
/// bit-for-bit from a single integer seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform real in [0,1) from the top 53 bits of one draw.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform real in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        return next() % n;
    }

    /// Standard normal via Box-Muller on two consecutive uniform draws.
    /// No caching: every call consumes exactly two draws (rejecting the
    /// measure-zero u1 == 0), so the stream position does not depend on
    /// call parity.
    double next_gaussian() {
        double u1 = next_unit();
        while (u1 == 0.0) u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace vfc
