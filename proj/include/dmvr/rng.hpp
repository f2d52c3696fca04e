#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dmvr {

/// Deterministic random stream. All distributions are derived from the
/// mt19937_64 output by hand so that draws are bit-identical across
/// platforms and standard-library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Unbiased uniform draw from {0, ..., bound-1}. bound <= 1 returns 0
    /// without consuming engine output.
    std::uint32_t below(std::uint32_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::uint32_t>(x % bound);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-unit()) / rate; }

    /// Fair coin.
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace dmvr
