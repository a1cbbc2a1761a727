#include "hc/gf2k.hpp"

#include <bit>
#include <string>

#include "hc/error.hpp"

namespace hc {

namespace {
int poly_degree(uint64_t p) { return 63 - std::countl_zero(p); } // p != 0

// remainder of carry-less division of a by m (m != 0)
uint64_t poly_mod(uint64_t a, uint64_t m) {
    int dm = poly_degree(m);
    while (a != 0 && poly_degree(a) >= dm)
        a ^= m << (poly_degree(a) - dm);
    return a;
}

bool is_irreducible(uint64_t p, int k) {
    // a reducible degree-k polynomial has a factor of degree <= k/2
    for (uint64_t q = 2; poly_degree(q) <= k / 2; ++q)
        if (poly_mod(p, q) == 0)
            return false;
    return true;
}
} // namespace

FieldCtx find_irreducible(int k) {
    if (k < 2 || k > 26)
        throw InputError("field degree must be in [2, 26], got " + std::to_string(k));
    for (uint64_t p = uint64_t{1} << k; p < uint64_t{1} << (k + 1); ++p)
        if (is_irreducible(p, k))
            return FieldCtx{k, uint32_t(p)};
    throw InputError("no irreducible of degree " + std::to_string(k)); // unreachable
}

FieldCtx field_from_modulus(uint32_t modulus) {
    if (modulus == 0)
        throw InputError("field modulus must be nonzero");
    int k = poly_degree(modulus);
    if (k < 2 || k > 26)
        throw InputError("field modulus degree must be in [2, 26]");
    if (!is_irreducible(modulus, k))
        throw InputError("field modulus is reducible");
    return FieldCtx{k, modulus};
}

uint32_t FieldCtx::mul(uint32_t a, uint32_t b) const {
    uint32_t r = 0;
    while (b != 0) {
        if (b & 1)
            r ^= a;
        b >>= 1;
        bool overflow = (a >> (k - 1)) & 1;
        a <<= 1;
        if (overflow)
            a ^= modulus; // clears bit k, folds in the low part
    }
    return r;
}

uint32_t FieldCtx::poly_eval_deg3(const std::array<uint32_t, 4>& s, uint32_t x) const {
    uint32_t r = s[3];
    r = mul(r, x) ^ s[2];
    r = mul(r, x) ^ s[1];
    return mul(r, x) ^ s[0];
}

} // namespace hc
