#pragma once

#include <cstdint>
#include <random>

namespace hc {

// All randomness flows through explicit Rng parameters with single-owner
// semantics: a function that consumes randomness takes Rng& and documents
// how many draws it makes only through its behavior (reruns with the same
// seed are bit-identical). mt19937_64 output is fully specified by the
// standard; we never use std::*_distribution, whose output is not portable
// across library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t u64() { return eng_(); }

    // Uniform in [0, n). Rejection sampling, no modulo bias.
    uint64_t below(uint64_t n) {
        uint64_t reject = (~n + 1) % n; // 2^64 mod n
        uint64_t x;
        do {
            x = u64();
        } while (x < reject);
        return x % n;
    }

    // b uniform bits, b in [1, 64].
    uint64_t bits(int b) { return u64() >> (64 - b); }

    bool coin() { return (u64() >> 63) != 0; }

    // Uniform double in [0, 1) with 53-bit resolution.
    double unit() { return double(u64() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

} // namespace hc
