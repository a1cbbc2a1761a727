#include "hc/circuit.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

#include "hc/error.hpp"

namespace hc {

const std::array<const char*, 16> kOpcodeName = {
    "FALSE", "NOR",   "NCIMP", "NOTL", "NIMP", "NOTR", "XOR",  "NAND",
    "AND",   "XNOR",  "RIGHT", "IMP",  "LEFT", "CIMP", "OR",   "TRUE",
};

uint32_t Circuit::add(uint8_t op, uint32_t l, uint32_t r) {
    gates.push_back(Gate{op, l, r});
    return gate_ref(gates.size() - 1);
}

void validate(const Circuit& c) {
    if (c.n < 1 || c.n > 26)
        throw InputError("circuit arity must be in [1, 26]");
    for (uint64_t i = 0; i < c.gates.size(); ++i) {
        uint32_t limit = uint32_t(c.n) + 2 + uint32_t(i); // refs strictly before gate i
        if (c.gates[i].l >= limit || c.gates[i].r >= limit)
            throw InputError("circuit: forward or out-of-range ref at gate " + std::to_string(i));
        if (c.gates[i].op > 15)
            throw InputError("circuit: bad opcode at gate " + std::to_string(i));
    }
    if (c.output >= uint32_t(c.n) + 2 + c.gates.size())
        throw InputError("circuit: output ref out of range");
}

int eval(const Circuit& c, uint64_t x) {
    validate(c);
    std::vector<uint8_t> v(c.n + 2 + c.gates.size());
    v[0] = 0;
    v[1] = 1;
    for (int j = 1; j <= c.n; ++j)
        v[1 + j] = (x >> (c.n - j)) & 1;
    for (uint64_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        v[c.n + 2 + i] = (g.op >> (2 * v[g.l] + v[g.r])) & 1;
    }
    return v[c.output];
}

namespace {
// slice for input bit level L < 6 inside a 64-aligned chunk: bit p = (p >> L) & 1
constexpr uint64_t kLowMask[6] = {
    0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
    0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
};

uint64_t gate_slice(uint8_t op, uint64_t a, uint64_t b) {
    // the builders emit almost nothing but XOR and AND; fast-path those
    if (op == kXor)
        return a ^ b;
    if (op == kAnd)
        return a & b;
    uint64_t na = ~a, nb = ~b;
    return (na & nb & (uint64_t) - (int64_t)(op & 1)) |
           (na & b & (uint64_t) - (int64_t)((op >> 1) & 1)) |
           (a & nb & (uint64_t) - (int64_t)((op >> 2) & 1)) |
           (a & b & (uint64_t) - (int64_t)((op >> 3) & 1));
}
} // namespace

TruthTable truth_table(const Circuit& c) {
    validate(c);
    TruthTable out(c.n);
    uint64_t chunks = (out.size() + 63) / 64;
    const Gate* gates = c.gates.data();
    uint64_t ngates = c.gates.size();

#pragma omp parallel
    {
        std::vector<uint64_t> v(c.n + 2 + ngates);
        v[0] = 0;
        v[1] = ~uint64_t{0};
#pragma omp for schedule(static)
        for (int64_t w = 0; w < int64_t(chunks); ++w) {
            uint64_t base = uint64_t(w) * 64;
            for (int j = 1; j <= c.n; ++j) {
                int level = c.n - j;
                v[1 + j] = level < 6 ? kLowMask[level]
                                     : ((base >> level) & 1 ? ~uint64_t{0} : 0);
            }
            for (uint64_t i = 0; i < ngates; ++i)
                v[c.n + 2 + i] = gate_slice(gates[i].op, v[gates[i].l], v[gates[i].r]);
            out.bits.set_word(w, v[c.output]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// table-to-circuit builder

namespace {
// subfunction pattern on `vars` variables: 2^vars bits, packed like a table
struct PatKey {
    int vars = 0;
    std::vector<uint64_t> w;
    bool operator==(const PatKey&) const = default;
};

struct PatKeyHash {
    size_t operator()(const PatKey& k) const {
        uint64_t h = 1469598103934665603ULL ^ uint64_t(k.vars);
        for (uint64_t x : k.w) {
            h ^= x;
            h *= 1099511628211ULL;
        }
        return size_t(h);
    }
};

uint64_t low_mask(int bits) { return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1; }

bool pat_zero(const std::vector<uint64_t>& w) {
    for (uint64_t x : w)
        if (x)
            return false;
    return true;
}

bool pat_ones(const std::vector<uint64_t>& w, int vars) {
    if (vars <= 6)
        return w[0] == low_mask(1 << vars);
    for (uint64_t x : w)
        if (x != ~uint64_t{0})
            return false;
    return true;
}

// halves on the leading remaining variable: low indices = variable 0
void pat_split(const std::vector<uint64_t>& w, int vars, std::vector<uint64_t>& lo,
               std::vector<uint64_t>& hi) {
    if (vars <= 6) {
        int half = 1 << (vars - 1);
        lo.assign(1, w[0] & low_mask(half));
        hi.assign(1, (w[0] >> half) & low_mask(half));
    } else {
        size_t hw = w.size() / 2;
        lo.assign(w.begin(), w.begin() + hw);
        hi.assign(w.begin() + hw, w.end());
    }
}

std::vector<uint64_t> pat_xor(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    std::vector<uint64_t> r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] ^ b[i];
    return r;
}

struct JuntaBuilder {
    Circuit c;
    int k;
    std::unordered_map<PatKey, uint32_t, PatKeyHash> memo;

    explicit JuntaBuilder(int k_) : c(k_), k(k_) {}

    // pattern over x_{k-vars+1} .. x_k; that leading variable is split first
    uint32_t build(int vars, std::vector<uint64_t> P) {
        if (pat_zero(P))
            return Circuit::kConst0;
        if (pat_ones(P, vars))
            return Circuit::kConst1;
        PatKey key{vars, std::move(P)};
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;

        uint32_t ref;
        uint32_t xref = c.input_ref(k - vars + 1);
        if (vars == 1) {
            // non-constant single-variable pattern: bit x of the pattern is
            // f(x), so 0b10 is the variable itself and 0b01 its negation
            ref = key.w[0] == 0b10 ? xref : c.add(kNotl, xref, xref);
        } else {
            std::vector<uint64_t> L, H;
            pat_split(key.w, vars, L, H);
            std::vector<uint64_t> X = pat_xor(L, H);
            if (pat_zero(X)) {
                ref = build(vars - 1, std::move(L)); // variable irrelevant
            } else {
                // f = fL ^ (x & (fL ^ fH)); skip the AND when the xor branch
                // is constant 1 and the XOR when the low branch is constant 0
                uint32_t lref = build(vars - 1, std::move(L));
                uint32_t dref = build(vars - 1, std::move(X));
                uint32_t t = dref == Circuit::kConst1 ? xref : c.add(kAnd, xref, dref);
                ref = lref == Circuit::kConst0 ? t : c.add(kXor, lref, t);
            }
        }
        memo.emplace(std::move(key), ref);
        return ref;
    }
};

} // namespace

Circuit build_junta_table(const TruthTable& g) {
    if (g.n > 24)
        throw InputError("build_junta_table: arity capped at 24");
    JuntaBuilder b(g.n);
    std::vector<uint64_t> P(g.bits.words());
    for (uint64_t i = 0; i < P.size(); ++i)
        P[i] = g.bits.word(i);
    b.c.output = b.build(g.n, std::move(P));
    return std::move(b.c);
}

uint64_t predict_junta_gates(const TruthTable& g) {
    if (g.n > 24)
        throw InputError("predict_junta_gates: arity capped at 24");
    // breadth-first over the distinct-subpattern DAG, costing each node by
    // the same degenerate-case rules the builder applies
    std::unordered_set<PatKey, PatKeyHash> seen;
    std::vector<PatKey> stack;
    auto push = [&](int vars, std::vector<uint64_t> w) {
        if (pat_zero(w) || pat_ones(w, vars))
            return;
        PatKey key{vars, std::move(w)};
        if (seen.insert(key).second)
            stack.push_back(std::move(key));
    };
    std::vector<uint64_t> P(g.bits.words());
    for (uint64_t i = 0; i < P.size(); ++i)
        P[i] = g.bits.word(i);
    uint64_t gates = 0;
    push(g.n, std::move(P));
    while (!stack.empty()) {
        PatKey key = std::move(stack.back());
        stack.pop_back();
        if (key.vars == 1) {
            gates += key.w[0] == 0b01 ? 1 : 0; // the negation costs one gate
            continue;
        }
        std::vector<uint64_t> L, H;
        pat_split(key.w, key.vars, L, H);
        std::vector<uint64_t> X = pat_xor(L, H);
        if (pat_zero(X)) {
            push(key.vars - 1, std::move(L));
            continue;
        }
        gates += uint64_t(!pat_ones(X, key.vars - 1)) + uint64_t(!pat_zero(L));
        push(key.vars - 1, std::move(X));
        push(key.vars - 1, std::move(L));
    }
    return gates;
}

// ---------------------------------------------------------------------------
// generator evaluator

namespace {
// xor-chain the refs (skipping none); empty -> const0
uint32_t xor_chain(Circuit& c, const std::vector<uint32_t>& refs) {
    if (refs.empty())
        return Circuit::kConst0;
    uint32_t acc = refs[0];
    for (size_t i = 1; i < refs.size(); ++i)
        acc = c.add(kXor, acc, refs[i]);
    return acc;
}
} // namespace

Circuit build_quad_gen_circuit(const FieldCtx& F, const std::array<uint32_t, 4>& seed) {
    int k = F.k;
    Circuit c(k);
    // input x_j carries field-element bit k-j
    auto bit_ref = [&](int i) { return c.input_ref(k - i); };

    // affine + quadratic terms collapse to one parity mask over the input
    // bits: bit0(s1 x) and bit0(s2 x^2) are both linear functionals of x
    uint32_t lin = 0;
    for (int i = 0; i < k; ++i) {
        uint32_t e = uint32_t{1} << i;
        uint32_t m = uint32_t(iota(F.mul(seed[1], e))) ^ uint32_t(iota(F.mul(seed[2], F.mul(e, e))));
        lin |= m << i;
    }

    // cubic term: with u = x^2, bit0(s3 x u) = xor_j x_j * parity(R_j & u),
    // R_j[i] = bit0(s3 e_j e_i); u_i itself is a parity of x bits
    std::vector<uint32_t> R(k, 0);
    uint32_t used_u = 0;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i)
            if (iota(F.mul(seed[3], F.mul(uint32_t{1} << j, uint32_t{1} << i))))
                R[j] |= uint32_t{1} << i;
        used_u |= R[j];
    }

    std::vector<uint32_t> uref(k, Circuit::kConst0);
    for (int i = 0; i < k; ++i) {
        if (!((used_u >> i) & 1))
            continue;
        std::vector<uint32_t> parts;
        for (int j = 0; j < k; ++j) {
            uint32_t sq = F.mul(uint32_t{1} << j, uint32_t{1} << j);
            if ((sq >> i) & 1)
                parts.push_back(bit_ref(j));
        }
        uref[i] = xor_chain(c, parts);
    }

    std::vector<uint32_t> terms;
    {
        std::vector<uint32_t> parts;
        for (int i = 0; i < k; ++i)
            if ((lin >> i) & 1)
                parts.push_back(bit_ref(i));
        if (!parts.empty())
            terms.push_back(xor_chain(c, parts));
    }
    for (int j = 0; j < k; ++j) {
        if (R[j] == 0)
            continue;
        std::vector<uint32_t> parts;
        for (int i = 0; i < k; ++i)
            if (((R[j] >> i) & 1) && uref[i] != Circuit::kConst0)
                parts.push_back(uref[i]);
        if (parts.empty())
            continue;
        terms.push_back(c.add(kAnd, bit_ref(j), xor_chain(c, parts)));
    }

    uint32_t out = xor_chain(c, terms);
    if (iota(seed[0])) {
        if (out == Circuit::kConst0)
            out = Circuit::kConst1;
        else
            out = c.add(kNotl, out, out);
    }
    c.output = out;
    return c;
}

// ---------------------------------------------------------------------------
// composition

Circuit xor_compose(const Circuit& a, const Circuit& b) {
    if (a.n != b.n)
        throw InputError("xor_compose: arity mismatch");
    Circuit c(a.n);
    c.gates = a.gates;
    uint32_t shift = uint32_t(a.gates.size());
    auto remap = [&](uint32_t ref) { return ref < uint32_t(b.n) + 2 ? ref : ref + shift; };
    for (const Gate& g : b.gates)
        c.gates.push_back(Gate{g.op, remap(g.l), remap(g.r)});
    c.output = c.add(kXor, a.output, remap(b.output));
    return c;
}

Circuit lift_prefix(const Circuit& c, int n) {
    if (n < c.n)
        throw InputError("lift_prefix: target arity below source arity");
    Circuit out(n);
    uint32_t delta = uint32_t(n - c.n);
    auto remap = [&](uint32_t ref) { return ref < uint32_t(c.n) + 2 ? ref : ref + delta; };
    out.gates.reserve(c.gates.size());
    for (const Gate& g : c.gates)
        out.gates.push_back(Gate{g.op, remap(g.l), remap(g.r)});
    out.output = remap(c.output);
    return out;
}

Circuit build_parity(int n, const std::vector<int>& vars) {
    if (vars.empty())
        throw InputError("build_parity: empty variable set");
    Circuit c(n);
    std::vector<char> used(n + 1, 0);
    std::vector<uint32_t> refs;
    for (int j : vars) {
        if (j < 1 || j > n)
            throw InputError("build_parity: variable out of range");
        if (used[j])
            throw InputError("build_parity: repeated variable");
        used[j] = 1;
        refs.push_back(c.input_ref(j));
    }
    c.output = xor_chain(c, refs);
    return c;
}

// ---------------------------------------------------------------------------
// netlist text format

namespace {
std::string ref_name(const Circuit& c, uint32_t ref) {
    if (ref == 0)
        return "c0";
    if (ref == 1)
        return "c1";
    if (ref < uint32_t(c.n) + 2)
        return "x" + std::to_string(ref - 1);
    return "g" + std::to_string(ref - c.n - 2);
}

uint32_t parse_ref(const std::string& tok, int n, uint64_t gates_so_far) {
    auto fail = [&]() -> uint32_t { throw InputError("netlist: bad ref '" + tok + "'"); };
    if (tok == "c0")
        return 0;
    if (tok == "c1")
        return 1;
    if (tok.size() < 2)
        return fail();
    char kind = tok[0];
    uint64_t idx = 0;
    for (size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9')
            return fail();
        idx = idx * 10 + uint64_t(tok[i] - '0');
    }
    if (kind == 'x') {
        if (idx < 1 || idx > uint64_t(n))
            throw InputError("netlist: input out of range in '" + tok + "'");
        return uint32_t(1 + idx);
    }
    if (kind == 'g') {
        if (idx >= gates_so_far)
            throw InputError("netlist: forward ref in '" + tok + "'");
        return uint32_t(n + 2 + idx);
    }
    return fail();
}
} // namespace

void netlist_write(std::ostream& os, const Circuit& c) {
    validate(c);
    os << "INPUTS " << c.n << "\n";
    for (uint64_t i = 0; i < c.gates.size(); ++i)
        os << "g" << i << " = " << kOpcodeName[c.gates[i].op] << " " << ref_name(c, c.gates[i].l)
           << " " << ref_name(c, c.gates[i].r) << "\n";
    os << "OUT " << ref_name(c, c.output) << "\n";
}

Circuit netlist_read(std::istream& is) {
    std::string line;
    int n = -1;
    while (std::getline(is, line) && line.empty())
        ;
    if (std::sscanf(line.c_str(), "INPUTS %d", &n) != 1)
        throw InputError("netlist: expected 'INPUTS <n>', got '" + line + "'");
    if (n < 1 || n > 26)
        throw InputError("netlist: arity out of range");
    Circuit c(n);
    bool saw_out = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "OUT") {
            std::string tok;
            if (!(ls >> tok))
                throw InputError("netlist: OUT needs a ref");
            c.output = parse_ref(tok, n, c.gates.size());
            saw_out = true;
            break;
        }
        std::string eq, opname, ltok, rtok;
        if (!(ls >> eq >> opname >> ltok >> rtok) || eq != "=")
            throw InputError("netlist: bad gate line '" + line + "'");
        if (first != "g" + std::to_string(c.gates.size()))
            throw InputError("netlist: gates must be named in order, got '" + first + "'");
        int op = -1;
        for (int i = 0; i < 16; ++i)
            if (opname == kOpcodeName[i])
                op = i;
        if (op < 0)
            throw InputError("netlist: unknown opcode '" + opname + "'");
        uint32_t l = parse_ref(ltok, n, c.gates.size());
        uint32_t r = parse_ref(rtok, n, c.gates.size());
        c.add(uint8_t(op), l, r);
    }
    if (!saw_out)
        throw InputError("netlist: missing OUT line");
    validate(c);
    return c;
}

std::string netlist_to_string(const Circuit& c) {
    std::ostringstream os;
    netlist_write(os, c);
    return os.str();
}

Circuit netlist_from_string(const std::string& text) {
    std::istringstream is(text);
    return netlist_read(is);
}

} // namespace hc
