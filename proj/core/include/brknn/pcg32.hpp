#pragma once

#include <cstdint>

namespace brknn {

/// Minimal PCG-XSH-RR 64/32 generator. The 64-bit state advances through the
/// LCG state = state * 6364136223846793005 + inc, and each output is a
/// random-rotated xorshift of the previous state. Workload generation uses
/// this fixed, documented scheme so identical seeds reproduce identical
/// workloads on any platform.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
        inc_ = (stream << 1u) | 1u;
        state_ = 0;
        next();
        state_ += seed;
        next();
    }

    std::uint32_t next() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Unbiased value in [0, bound) via rejection sampling; bound must be > 0.
    std::uint32_t next_bounded(std::uint32_t bound) {
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    std::uint64_t next64() {
        const std::uint64_t hi = next();
        return (hi << 32) | next();
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double next_double() {
        return static_cast<double>(next64() >> 11u) * 0x1.0p-53;
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

} // namespace brknn
