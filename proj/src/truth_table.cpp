#include "hc/truth_table.hpp"

#include <bit>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "hc/error.hpp"

namespace hc {

namespace {
constexpr int kMaxN = 26;

void check_arity(int n) {
    if (n < 1 || n > kMaxN)
        throw InputError("truth table arity must be in [1, 26], got " + std::to_string(n));
}
} // namespace

TruthTable::TruthTable(int n_) : n(n_), bits(uint64_t{1} << n_) { check_arity(n_); }

TruthTable TruthTable::constant(int n, int v) {
    check_arity(n);
    TruthTable f(n);
    f.bits = BitVec(f.size(), v != 0);
    return f;
}

TruthTable TruthTable::random(int n, Rng& rng) {
    TruthTable f(n);
    for (uint64_t wi = 0; wi < f.bits.words(); ++wi)
        f.bits.set_word(wi, rng.u64());
    return f;
}

TruthTable TruthTable::parity(int n) {
    // index bits are exactly the input bits, so parity(x) = popcount(index) mod 2
    TruthTable f(n);
    for (uint64_t x = 0; x < f.size(); ++x)
        if (std::popcount(x) & 1)
            f.bits.set(x, 1);
    return f;
}

TruthTable junta_embed(const TruthTable& g, int n) {
    if (n < g.n)
        throw InputError("junta_embed: target arity below junta arity");
    if (n == g.n)
        return g;
    check_arity(n);
    TruthTable f(n);
    int shift = n - g.n;
    for (uint64_t x = 0; x < f.size(); ++x)
        if (g.at(x >> shift))
            f.bits.set(x, 1);
    return f;
}

std::string tt_to_string(const TruthTable& f) {
    std::ostringstream os;
    tt_write(os, f);
    return os.str();
}

void tt_write(std::ostream& os, const TruthTable& f) {
    os << "TT n=" << f.n << "\n";
    uint64_t digits = (f.size() + 3) / 4;
    for (uint64_t d = 0; d < digits; ++d) {
        int v = 0;
        for (int j = 0; j < 4; ++j) {
            uint64_t idx = 4 * d + j;
            if (idx < f.size() && f.at(idx))
                v |= 8 >> j; // index 4d first, big bit first
        }
        os << "0123456789abcdef"[v];
    }
    os << "\n";
}

TruthTable tt_from_string(const std::string& text) {
    std::istringstream is(text);
    return tt_read(is);
}

TruthTable tt_read(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw InputError("truth table: missing header");
    int n = 0;
    if (std::sscanf(header.c_str(), "TT n=%d", &n) != 1)
        throw InputError("truth table: bad header '" + header + "'");
    check_arity(n);
    std::string hex;
    if (!std::getline(is, hex))
        throw InputError("truth table: missing data line");
    TruthTable f(n);
    uint64_t digits = (f.size() + 3) / 4;
    if (hex.size() != digits)
        throw InputError("truth table: expected " + std::to_string(digits) +
                         " hex digits, got " + std::to_string(hex.size()));
    for (uint64_t d = 0; d < digits; ++d) {
        char ch = hex[d];
        int v;
        if (ch >= '0' && ch <= '9')
            v = ch - '0';
        else if (ch >= 'a' && ch <= 'f')
            v = 10 + (ch - 'a');
        else if (ch >= 'A' && ch <= 'F')
            v = 10 + (ch - 'A');
        else
            throw InputError("truth table: bad hex digit");
        for (int j = 0; j < 4; ++j) {
            uint64_t idx = 4 * d + j;
            if (idx < f.size() && (v & (8 >> j)))
                f.bits.set(idx, 1);
        }
    }
    return f;
}

} // namespace hc
