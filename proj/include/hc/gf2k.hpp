#pragma once

#include <array>
#include <cstdint>

namespace hc {

// Arithmetic in GF(2^k), 2 <= k <= 26. Elements are k-bit masks with the
// coefficient of x^0 in the lowest bit; the modulus is an irreducible
// polynomial of degree k stored as a (k+1)-bit mask.
//
// Multiplication is plain shift-reduce (quadratic); fast carry-less tricks
// are deliberately out of scope.
struct FieldCtx {
    int k = 0;
    uint32_t modulus = 0;

    // Product of a and b reduced mod the modulus. a, b must be k-bit masks.
    uint32_t mul(uint32_t a, uint32_t b) const;

    // s[0] + s[1] x + s[2] x^2 + s[3] x^3 via Horner (3 muls, 3 adds).
    uint32_t poly_eval_deg3(const std::array<uint32_t, 4>& s, uint32_t x) const;

    uint64_t order() const { return uint64_t{1} << k; }
};

// Lexicographically smallest irreducible of degree k, found by trial
// division against every polynomial of degree <= k/2. Deterministic, so
// serialized generator seeds are portable across builds.
FieldCtx find_irreducible(int k);

// FieldCtx around a stored modulus (degree = top set bit); validates
// irreducibility so a corrupt file cannot smuggle in a non-field.
FieldCtx field_from_modulus(uint32_t modulus);

// The output coordinate of the generator: the constant-term coefficient.
// Any fixed coordinate of the field element would do; this one is frozen so
// outputs are reproducible.
inline int iota(uint32_t e) { return int(e & 1); }

} // namespace hc
