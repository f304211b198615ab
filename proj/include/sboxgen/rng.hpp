#pragma once

#include <cstdint>

namespace sboxgen {

// splitmix64 finalizer; full-period 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic 64-bit stream. Cheap to construct, so every unit of work
// (run, iteration, child slot) gets its own stream and results stay
// schedule-independent.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // Uniform in [0, bound), bound >= 1. Lemire's multiply-shift with
    // rejection keeps the draw unbiased.
    std::uint32_t below(std::uint32_t bound) {
        std::uint64_t m = static_cast<std::uint64_t>(static_cast<std::uint32_t>(next())) * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                m = static_cast<std::uint64_t>(static_cast<std::uint32_t>(next())) * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    double unit_real() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Seed for an independent substream identified by (a, b, c). Distinct
// coordinates give distinct streams with overwhelming probability.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ull);
    h = mix64(h ^ (a + 0x9e3779b97f4a7c15ull));
    h = mix64(h ^ (b + 0xbb67ae8584caa73bull));
    h = mix64(h ^ (c + 0x3c6ef372fe94f82bull));
    return h;
}

}  // namespace sboxgen
