#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hc/gf2k.hpp"
#include "hc/truth_table.hpp"

namespace hc {

// Fan-in-2 circuit over arbitrary 2-bit gates.
//
// A gate opcode is the 4-bit truth table of the gate: bit (2l + r) of the
// opcode is the output on inputs (l, r). All 16 opcodes are legal, including
// the degenerate ones; every instantiated gate counts toward size.
//
// References address, in order: the constants (0 -> const 0, 1 -> const 1),
// the inputs (2 .. n+1 for x1 .. xn), then gates (n+2+i for gate i). Refs
// may only point backward, so a single forward pass evaluates the circuit.
// Size = gate count; inputs and constants are free leaves.

enum Opcode : uint8_t {
    kFalse = 0,  // 0
    kNor = 1,    // ~(l|r)
    kNcimp = 2,  // ~l & r
    kNotl = 3,   // ~l
    kNimp = 4,   // l & ~r
    kNotr = 5,   // ~r
    kXor = 6,    // l ^ r
    kNand = 7,   // ~(l&r)
    kAnd = 8,    // l & r
    kXnor = 9,   // ~(l^r)
    kRight = 10, // r
    kImp = 11,   // ~l | r
    kLeft = 12,  // l
    kCimp = 13,  // l | ~r
    kOr = 14,    // l | r
    kTrue = 15,  // 1
};

// canonical names, indexed by opcode, used by the netlist format
extern const std::array<const char*, 16> kOpcodeName;

struct Gate {
    uint8_t op = 0;
    uint32_t l = 0;
    uint32_t r = 0;

    bool operator==(const Gate&) const = default;
};

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    uint32_t output = 0;

    Circuit() = default;
    explicit Circuit(int n_) : n(n_) {}

    uint64_t size() const { return gates.size(); }

    static constexpr uint32_t kConst0 = 0;
    static constexpr uint32_t kConst1 = 1;
    uint32_t input_ref(int j) const { return uint32_t(1 + j); } // x_j, 1-based
    uint32_t gate_ref(uint64_t i) const { return uint32_t(n + 2 + i); }

    // appends a gate and returns its ref
    uint32_t add(uint8_t op, uint32_t l, uint32_t r);

    bool operator==(const Circuit&) const = default;
};

// Throws InputError on out-of-range or forward refs.
void validate(const Circuit& c);

// x is a packed input index under the shared convention (x1 in the most
// significant of the n low bits).
int eval(const Circuit& c, uint64_t x);

// All 2^n inputs, bit-packed, computed 64 inputs at a time and parallelized
// over chunks. Pure bit operations, so the result is exact and
// thread-count independent.
TruthTable truth_table(const Circuit& c);

// Circuit computing the given table exactly. Shannon expansion on x1 in the
// XOR form f = f0 ^ (x1 & (f0 ^ f1)), recursing on f0 and f0^f1 with one
// global pool of already-built subfunctions, so each distinct subpattern is
// built once and a node costs at most 2 gates.
Circuit build_junta_table(const TruthTable& g);

// Gate count build_junta_table(g) will produce, computed by an independent
// breadth-first walk over the distinct-subpattern DAG (no circuit is
// built). Exact, not a bound.
uint64_t predict_junta_gates(const TruthTable& g);

// Circuit on k inputs computing x -> iota(s0 + s1 x + s2 x^2 + s3 x^3) over
// the field. Linearity of y -> bit0(a y) and of squaring turns the affine
// and quadratic terms into one parity mask over the input bits; the cubic
// term becomes a bilinear form between x and u = x^2, whose bits are
// parities of x. Size <= 3 k^2 (frozen bound; roughly 2 k^2 in practice).
// Input x_j carries field-element bit k-j, so the truth-table index of an
// assignment equals the field element, position for position.
Circuit build_quad_gen_circuit(const FieldCtx& F, const std::array<uint32_t, 4>& seed);

// Circuit computing a(x) ^ b(x); size is exactly size(a) + size(b) + 1.
Circuit xor_compose(const Circuit& a, const Circuit& b);

// Reinterpret a circuit on k bits as one on n >= k bits reading x1..xk
// (the prefix). Gate count is preserved; only refs are renumbered.
Circuit lift_prefix(const Circuit& c, int n);

// XOR of the listed variables (1-based); |vars| - 1 gates. Throws on an
// empty set or an out-of-range variable.
Circuit build_parity(int n, const std::vector<int>& vars);

// Measured size next to the named analytic terms it is compared against.
struct SizeReport {
    uint64_t measured = 0;
    std::vector<std::pair<std::string, double>> terms;
};

// Netlist text format:
//   INPUTS <n>
//   g<i> = <OPNAME> <ref> <ref>
//   ...
//   OUT <ref>
// with refs x<j> (1-based), c0, c1, g<j> (0-based, backward only).
void netlist_write(std::ostream& os, const Circuit& c);
Circuit netlist_read(std::istream& is);
std::string netlist_to_string(const Circuit& c);
Circuit netlist_from_string(const std::string& text);

} // namespace hc
