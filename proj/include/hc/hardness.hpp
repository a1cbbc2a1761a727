#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hc/circuit.hpp"
#include "hc/distribution.hpp"
#include "hc/rng.hpp"
#include "hc/truth_table.hpp"

namespace hc {

using BigInt = boost::multiprecision::cpp_int;

// Explicit over-count of fan-in-2 circuits with s gates on n inputs: each
// gate picks an ordered predecessor pair out of n inputs + s gates + 2
// constants and one of 16 opcodes, giving ((n+s+2)^2 * 16)^s. Exact integer.
BigInt count_circuits_bound(int n, uint64_t s);
// log2 of the same bound in double precision (usable when the integer has
// tens of thousands of digits).
double count_circuits_log2(int n, uint64_t s);

// Upper tail Pr[Bin(trials, 1/2) >= threshold], carried in log2 space since
// interesting values go far below double range. `exact` means long-double
// summation (trials <= 2^20); beyond that the Hoeffding bound
// exp(-2 t^2 / trials) stands in, degrading to the trivial bound 1 when the
// threshold does not clear the mean.
struct TailProb {
    double log2p = 0.0;
    bool exact = false;
};
TailProb chernoff_tail(uint64_t trials, uint64_t threshold);

// Union-bound existence certificate: a random k-junta fails to be
// (1-delta)-approximated by every size-s circuit with probability at least
// 1 - circuitCountBound * tailProb; the certificate is `valid` when that
// product drops below 1.
struct Certificate {
    int n = 0;
    int k = 0;
    uint64_t s = 0;
    double delta = 0.0;
    BigInt circuitCountBound;
    double countLog2 = 0.0;
    TailProb tail; // Pr[Bin(2^k,1/2) >= ceil((1-delta) 2^k)]
    double productLog2 = 0.0;
    bool valid = false;
};

// Requires 1 <= k <= n <= 26 and delta in [0, 1).
Certificate existence_certificate(int n, int k, uint64_t s, double delta);

// Smallest k in [k_lo, k_hi] whose certificate is valid (validity is
// monotone in k), or 0 when none is.
int min_valid_k(int n, uint64_t s, double delta, int k_lo = 1, int k_hi = 26);

// The sampler's junta arity: the smallest valid k at least
// ceil(log2(8 s log2 s)) (the frozen instantiation of 2^k = Omega(s log s)).
// Returns 0 when no k <= n works.
int default_junta_arity(int n, uint64_t s, double delta);

// CERT text block, one field per line.
void cert_write(std::ostream& os, const Certificate& c);
Certificate cert_read(std::istream& is);

struct HardSample {
    TruthTable f; // random k-junta embedded on n bits
    Certificate cert;
};

// k = 0 picks default_junta_arity; an explicit k (as in the toy-scale
// tightness experiments) is honored even when its certificate is invalid.
HardSample sample_hard_junta(int n, uint64_t s, double delta, Rng& rng, int k = 0);

// --------------------------------------------------------------------------
// exact toy-scale oracles

// Minimum formula size (tree model: a combined operand is re-counted, so
// cost(a op b) = cost(a) + cost(b) + 1; unary opcodes keep this exact for
// s <= 2) for every reachable table on n <= 4 inputs within maxGates <= 5.
// Each entry carries witness backpointers for netlist emission.
struct MinSizeEntry {
    int size = 0;
    uint8_t op = 0;    // meaningful when size > 0
    uint64_t l = 0, r = 0; // operand table masks
};

struct MinSizeTable {
    int n = 0;
    int maxGates = 0;
    std::map<uint64_t, MinSizeEntry> entry; // table mask -> min size + witness
};

MinSizeTable min_size_table(int n, int maxGates);

// Tree circuit reconstructed from the witness chain; truth_table of the
// result equals the mask again.
Circuit minsize_witness(const MinSizeTable& t, uint64_t mask);

// "MINSIZE n=<n>" header, then "<table-hex> <size>" per reachable table in
// ascending table order (hex digits in the truth-table text convention).
void minsize_write(std::ostream& os, const MinSizeTable& t);

// Best correlation E_H[(-1)^(f+g)] over k-juntas g on any variable subset:
// exhaustive over subsets, majority-per-projected-class inside each.
// Ties keep the lexicographically first subset. Guarded by total work.
struct JuntaFit {
    std::vector<int> vars; // 1-based, ascending
    double corr = 0.0;
};
JuntaFit best_junta_correlation(const TruthTable& f, int k, const Distribution& H);

// True iff no table reachable within s gates agrees with f on at least
// (1-delta)*2^n inputs, i.e. every size-s circuit leaves more than a delta
// fraction of disagreement. Exhaustive via min_size_table; n <= 4, s <= 4.
bool verify_inapprox_bruteforce(const TruthTable& f, int s, double delta);

} // namespace hc
