#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hc/bitvec.hpp"
#include "hc/rng.hpp"

namespace hc {

// Boolean function on n variables as a packed table of 2^n bits.
//
// Index convention (fixed across the whole toolkit): an input
// x = (x_1, ..., x_n) maps to index(x) = sum_j x_j * 2^(n-j), i.e. x_1 is
// the most significant bit. Consequently the prefix subcube c x {0,1}^ell
// occupies the contiguous index block [index(c)*2^ell, (index(c)+1)*2^ell).
struct TruthTable {
    int n = 0;
    BitVec bits;

    TruthTable() = default;
    explicit TruthTable(int n_);

    uint64_t size() const { return uint64_t{1} << n; }
    int at(uint64_t x) const { return bits.get(x); }
    void set(uint64_t x, int v) { bits.set(x, v); }

    bool operator==(const TruthTable&) const = default;

    static TruthTable constant(int n, int v);
    static TruthTable random(int n, Rng& rng);
    // parity(x) = x_1 xor ... xor x_n
    static TruthTable parity(int n);
};

// f(x_1..x_n) = g(x_1..x_k): the value of g on the k-bit prefix, replicated
// over each suffix block.
TruthTable junta_embed(const TruthTable& g, int n);

// Text format: "TT n=<n>" header, then one hex line covering indices in
// order, big nibble first (hex digit d holds indices 4d..4d+3, index 4d in
// the 8-weight bit).
std::string tt_to_string(const TruthTable& f);
TruthTable tt_from_string(const std::string& text);
void tt_write(std::ostream& os, const TruthTable& f);
TruthTable tt_read(std::istream& is);

} // namespace hc
