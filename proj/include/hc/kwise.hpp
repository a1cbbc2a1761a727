#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hc/bitvec.hpp"
#include "hc/circuit.hpp"
#include "hc/gf2k.hpp"
#include "hc/rng.hpp"

namespace hc {

// --------------------------------------------------------------------------
// quadratic construction: seed = 4 field elements, output bit at position x
// (read as a field element) is iota(s0 + s1 x + s2 x^2 + s3 x^3). Degree-3
// polynomials interpolate any 4 point-values, which makes every 4-position
// marginal exactly uniform over the 2^{4k} seeds.

struct QuadGenSpec {
    FieldCtx ctx;
    std::array<uint32_t, 4> seed = {0, 0, 0, 0};
};

// Throws InputError when x is outside [0, 2^k).
int quad_gen_bit(const QuadGenSpec& spec, uint64_t x);

// Packed-seed layout shared with GenView and the seed-space enumeration:
// coefficient s[i] occupies bits [i*k, (i+1)*k) of a little-endian word
// array of ceil(4k/64) words.
std::array<uint32_t, 4> quad_seed_unpack(const FieldCtx& F, const uint64_t* words);
std::vector<uint64_t> quad_seed_pack(const FieldCtx& F, const std::array<uint32_t, 4>& seed);

// --------------------------------------------------------------------------
// code-based linear construction: Enc is a random [m, n] code with measured
// relative distance delta; each output i looks at a random multiset S_i of
// ceil(10/delta) code positions through a random local table g_i; the
// generator is the inner product of the seed with the 16n local evaluations.

struct LinearGenSpec {
    int n = 0;       // message arity (2 <= n <= 16)
    int m = 0;       // code length (4n)
    double delta = 0;
    int set_size = 0; // ceil(10/delta), capped at 64 by redrawing the code
    bool verified = false;

    std::vector<uint32_t> enc;                // m row masks; Enc(x)_r = parity(enc[r] & x)
    std::vector<std::vector<uint16_t>> sets;  // 16n multisets of positions in [m]
    // per-output pattern tables, keyed by the packed restriction
    // Enc(x)_{S_i}; populated only on patterns that actually arise
    std::vector<std::unordered_map<uint64_t, int>> locals;

    // cached local-evaluation vectors: hvec[x] packs g_i(Enc(x)_{S_i}) over
    // i into seed-width words; hv_ok[x] = 0 flags a pattern missing from a
    // frozen spec. Derived, not serialized; rebuilt by finalize().
    std::vector<std::vector<uint64_t>> hvec;
    std::vector<char> hv_ok;

    int seed_len() const { return 16 * n; }
    int seed_words() const { return (seed_len() + 63) / 64; }
};

// Packed restriction Enc(x)_{S_i}, bit j = code bit at sets[i][j].
uint64_t linear_pattern(const LinearGenSpec& spec, int i, uint64_t x);

// Rejection-sampling build: draw code (redraw while the measured distance
// would push set_size past 64), draw sets, populate local tables over every
// position, then check the independence certificate (n <= 8; larger n skips
// it and leaves verified = false). Throws TargetMissed when max_restarts
// draws all fail.
LinearGenSpec linear_gen_build(int n, Rng& rng, int max_restarts);

// Certificate: over every subset X of the nonzero positions with
// 1 <= |X| <= 4, the XOR of the local-evaluation vectors is nonzero.
// Parallelizes over the leading subset element.
bool linear_independence_certificate(const LinearGenSpec& spec);

// Inner product over GF(2) of the seed (16n bits) with the local
// evaluations at x. Throws InputError on a pattern the spec has never seen.
int linear_gen_bit(const LinearGenSpec& spec, const BitVec& seed, uint64_t x);

// Rebuild hvec/hv_ok from enc+sets+locals (called by build and the loader).
void finalize(LinearGenSpec& spec);

// Exact circuit for x -> g_i(Enc(x)_{S_i}) via the table builder; guarded
// to set_size <= 16 (ScaleGuard above), since the general case is reported
// symbolically instead.
Circuit linear_local_circuit(const LinearGenSpec& spec, int i);

// Symbolic size accounting for one full generator output bit.
SizeReport linear_gen_size_report(const LinearGenSpec& spec);

// Circuit on the n message bits computing one fixed seed's generator output:
// the xor, over the seed's set bits i, of g_i applied to its parity taps
// Enc(x)_{S_i}. Subject to the same dense-table guard as
// linear_local_circuit.
Circuit linear_gen_seed_circuit(const LinearGenSpec& spec, const BitVec& seed);

// --------------------------------------------------------------------------
// generator view: a uniform adapter the testers consume. Seeds are packed
// little-endian into words; enum_seeds = 0 marks a seed space too large to
// enumerate (sampled mode only).

struct GenView {
    uint64_t enum_seeds = 0;
    int seed_bits = 0;
    uint64_t length = 0;
    std::function<int(const uint64_t* seed_words, uint64_t pos)> bit;
};

GenView quad_gen_view(const FieldCtx& F);
GenView linear_gen_view(const LinearGenSpec& spec);
// 2-wise control generator: bit(s, x) = <s, x> over GF(2). Order-2 marginals
// on distinct nonzero positions are uniform; order 3 fails on any triple
// {x, y, x xor y}.
GenView inner_product_view(int n);

// --------------------------------------------------------------------------
// testers

struct KwiseCheck {
    std::vector<uint64_t> positions;
    std::vector<uint64_t> counts; // 2^|positions| pattern counts
    bool ok = false;
};

struct KwiseReport {
    bool ok = false;
    bool exhaustive = false;
    uint64_t seeds_used = 0;
    std::vector<KwiseCheck> checks;
};

// Pattern counts for each position set of the given order (all sets when
// none are passed, guarded against combinatorial blowup). Exhaustive mode
// (enumerable seeds, no budget) demands exactly equal counts; sampled mode
// draws `sample_budget` seeds and demands every count within 5 standard
// deviations of uniform.
KwiseReport verify_kwise(const GenView& gen, int order,
                         std::vector<std::vector<uint64_t>> position_sets = {},
                         uint64_t sample_budget = 0, Rng* rng = nullptr);

struct AnticoncResult {
    uint64_t hits = 0;
    uint64_t seeds = 0;
    // integer-exact form of fraction >= 2/11
    bool meets_bound() const { return hits * 11 >= seeds * 2; }
    double fraction() const { return seeds ? double(hits) / double(seeds) : 0.0; }
};

// Fraction of seeds whose signed sum sum_i v_i (-1)^{bit_i} lands at least
// ||v||_2 / sqrt(3) away from zero.
AnticoncResult anticoncentration_check(const GenView& gen, const std::vector<double>& v,
                                       uint64_t sample_budget = 0, Rng* rng = nullptr);

// --------------------------------------------------------------------------
// file format: "KWGEN quad k=<k> mod=<hex> seed=<hex>" on one line, or
// "KWGEN linear n=<n> m=<m> delta=<g> verified=<0|1>" followed by ROW/SET
// lines and bare pattern lines "<i> <pattern-hex> <bit>".

void kwgen_write(std::ostream& os, const QuadGenSpec& spec);
void kwgen_write(std::ostream& os, const LinearGenSpec& spec);

struct KwGenFile {
    bool is_quad = true;
    QuadGenSpec quad;
    LinearGenSpec linear;
};
KwGenFile kwgen_read(std::istream& is);

} // namespace hc
