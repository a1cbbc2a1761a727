#include "hc/kwise.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "hc/error.hpp"
#include "hc/parallel.hpp"

namespace hc {

// --------------------------------------------------------------------------
// quadratic construction

int quad_gen_bit(const QuadGenSpec& spec, uint64_t x) {
    if (x >= spec.ctx.order())
        throw InputError("quad_gen_bit: position out of range");
    return iota(spec.ctx.poly_eval_deg3(spec.seed, uint32_t(x)));
}

std::vector<uint64_t> quad_seed_pack(const FieldCtx& F, const std::array<uint32_t, 4>& seed) {
    std::vector<uint64_t> w((4 * F.k + 63) / 64, 0);
    for (int i = 0; i < 4; ++i)
        for (int b = 0; b < F.k; ++b)
            if ((seed[i] >> b) & 1) {
                int pos = i * F.k + b;
                w[pos >> 6] |= uint64_t{1} << (pos & 63);
            }
    return w;
}

// --------------------------------------------------------------------------
// code-based construction

namespace {
// code word of x as an m-bit word (m <= 64)
uint64_t encode(const std::vector<uint32_t>& enc, uint64_t x) {
    uint64_t cw = 0;
    for (size_t r = 0; r < enc.size(); ++r)
        cw |= uint64_t(std::popcount(enc[r] & uint32_t(x)) & 1) << r;
    return cw;
}

int min_code_weight(const std::vector<uint32_t>& enc, int n) {
    int best = int(enc.size()) + 1;
    for (uint64_t x = 1; x < (uint64_t{1} << n); ++x)
        best = std::min(best, std::popcount(encode(enc, x)));
    return best;
}

uint64_t gather_pattern(uint64_t cw, const std::vector<uint16_t>& set) {
    uint64_t p = 0;
    for (size_t j = 0; j < set.size(); ++j)
        p |= ((cw >> set[j]) & 1) << j;
    return p;
}
} // namespace

uint64_t linear_pattern(const LinearGenSpec& spec, int i, uint64_t x) {
    if (i < 0 || i >= spec.seed_len())
        throw InputError("linear_pattern: output index out of range");
    if (x >= (uint64_t{1} << spec.n))
        throw InputError("linear_pattern: position out of range");
    return gather_pattern(encode(spec.enc, x), spec.sets[i]);
}

void finalize(LinearGenSpec& spec) {
    uint64_t N = uint64_t{1} << spec.n;
    int words = spec.seed_words();
    spec.hvec.assign(N, std::vector<uint64_t>(words, 0));
    spec.hv_ok.assign(N, 1);
    for (uint64_t x = 0; x < N; ++x) {
        uint64_t cw = encode(spec.enc, x);
        for (int i = 0; i < spec.seed_len(); ++i) {
            auto it = spec.locals[i].find(gather_pattern(cw, spec.sets[i]));
            if (it == spec.locals[i].end()) {
                spec.hv_ok[x] = 0;
                break;
            }
            if (it->second)
                spec.hvec[x][i >> 6] |= uint64_t{1} << (i & 63);
        }
    }
}

bool linear_independence_certificate(const LinearGenSpec& spec) {
    uint64_t N = uint64_t{1} << spec.n;
    int w = spec.seed_words();
    // flat copy for tight loops
    std::vector<uint64_t> hv(N * w);
    for (uint64_t x = 0; x < N; ++x) {
        if (!spec.hv_ok[x])
            throw InputError("certificate: spec has unseen patterns");
        for (int j = 0; j < w; ++j)
            hv[x * w + j] = spec.hvec[x][j];
    }
    auto nonzero_xor = [&](const uint64_t* a, uint64_t x) {
        uint64_t acc = 0;
        for (int j = 0; j < w; ++j)
            acc |= a[j] ^ hv[x * w + j];
        return acc != 0;
    };

    std::atomic<bool> ok{true};
    auto fine = [&] { return ok.load(std::memory_order_relaxed); };
#pragma omp parallel for schedule(dynamic)
    for (int64_t x1 = 1; x1 < int64_t(N); ++x1) {
        if (!fine())
            continue;
        std::vector<uint64_t> a1(w, 0), a2(w), a3(w);
        if (!nonzero_xor(a1.data(), x1)) {
            ok = false;
            continue;
        }
        for (int j = 0; j < w; ++j)
            a1[j] = hv[x1 * w + j];
        for (uint64_t x2 = uint64_t(x1) + 1; x2 < N && fine(); ++x2) {
            if (!nonzero_xor(a1.data(), x2)) {
                ok = false;
                break;
            }
            for (int j = 0; j < w; ++j)
                a2[j] = a1[j] ^ hv[x2 * w + j];
            for (uint64_t x3 = x2 + 1; x3 < N && fine(); ++x3) {
                if (!nonzero_xor(a2.data(), x3)) {
                    ok = false;
                    break;
                }
                for (int j = 0; j < w; ++j)
                    a3[j] = a2[j] ^ hv[x3 * w + j];
                for (uint64_t x4 = x3 + 1; x4 < N; ++x4)
                    if (!nonzero_xor(a3.data(), x4)) {
                        ok = false;
                        break;
                    }
            }
        }
    }
    return ok;
}

LinearGenSpec linear_gen_build(int n, Rng& rng, int max_restarts) {
    if (n < 2)
        throw InputError("linear_gen_build: need n >= 2 (order-4 claims are vacuous below)");
    if (n > 16)
        throw ScaleGuard("linear_gen_build: n capped at 16 (code distance is measured "
                         "by full message enumeration)");
    if (max_restarts < 1)
        throw InputError("linear_gen_build: need at least one attempt");

    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        LinearGenSpec spec;
        spec.n = n;
        spec.m = 4 * n;
        spec.enc.resize(spec.m);
        for (auto& row : spec.enc)
            row = uint32_t(rng.bits(n));
        int minw = min_code_weight(spec.enc, n);
        // patterns are packed into one word, so the per-output set must fit
        // in 64 positions; redraw the code when the measured distance is
        // too small for that
        if (minw == 0 || (10 * spec.m + minw - 1) / minw > 64)
            continue;
        spec.delta = double(minw) / double(spec.m);
        spec.set_size = (10 * spec.m + minw - 1) / minw;

        spec.sets.assign(spec.seed_len(), {});
        for (auto& set : spec.sets) {
            set.resize(spec.set_size);
            for (auto& idx : set)
                idx = uint16_t(rng.below(uint64_t(spec.m)));
        }

        spec.locals.assign(spec.seed_len(), {});
        for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
            uint64_t cw = encode(spec.enc, x);
            for (int i = 0; i < spec.seed_len(); ++i) {
                uint64_t p = gather_pattern(cw, spec.sets[i]);
                if (!spec.locals[i].count(p))
                    spec.locals[i][p] = rng.coin() ? 1 : 0;
            }
        }
        finalize(spec);

        if (n > 8) {
            spec.verified = false; // certificate cost grows as C(2^n, 4)
            return spec;
        }
        if (linear_independence_certificate(spec)) {
            spec.verified = true;
            return spec;
        }
    }

    // failure probability per attempt is at most C(2^n, <=4) (2/3)^{16n};
    // report it so an exhausted budget reads as the anomaly it is
    double log2_subsets = 4.0 * n + 2.0 * std::max(n - 2, 0); // crude log2 C(2^n,4) bound
    double log2_fail = log2_subsets + 16.0 * n * std::log2(2.0 / 3.0);
    std::ostringstream msg;
    msg << "linear_gen_build: " << max_restarts << " attempts failed; per-attempt failure "
        << "probability is bounded by 2^" << log2_fail << ", so inspect the rng or the caps";
    throw TargetMissed(msg.str());
}

int linear_gen_bit(const LinearGenSpec& spec, const BitVec& seed, uint64_t x) {
    if (int(seed.size()) != spec.seed_len())
        throw InputError("linear_gen_bit: seed must have 16n bits");
    if (x >= (uint64_t{1} << spec.n))
        throw InputError("linear_gen_bit: position out of range");
    if (spec.hvec.empty())
        throw InputError("linear_gen_bit: spec not finalized");
    if (!spec.hv_ok[x])
        throw InputError("linear_gen_bit: position hits a pattern this spec has never seen");
    uint64_t acc = 0;
    for (int j = 0; j < spec.seed_words(); ++j)
        acc ^= seed.word(j) & spec.hvec[x][j];
    return std::popcount(acc) & 1;
}

Circuit linear_local_circuit(const LinearGenSpec& spec, int i) {
    if (i < 0 || i >= spec.seed_len())
        throw InputError("linear_local_circuit: output index out of range");
    if (spec.set_size > 16)
        throw ScaleGuard("linear_local_circuit: dense table needs set_size <= 16; "
                         "this spec is accounted symbolically instead");
    TruthTable t(spec.set_size);
    for (const auto& [pattern, bit] : spec.locals[i])
        if (bit)
            t.set(pattern, 1); // unseen patterns stay 0
    return build_junta_table(t);
}

Circuit linear_gen_seed_circuit(const LinearGenSpec& spec, const BitVec& seed) {
    if (int(seed.size()) != spec.seed_len())
        throw InputError("linear_gen_seed_circuit: seed must have 16n bits");
    Circuit out(spec.n);
    // parity taps are shared across locals: tap[r] = parity(enc[r] & x)
    std::vector<uint32_t> tap(spec.m, Circuit::kConst0);
    std::vector<char> have_tap(spec.m, 0);
    auto tap_ref = [&](int r) {
        if (!have_tap[r]) {
            uint32_t ref = Circuit::kConst0;
            bool first = true;
            for (int q = spec.n - 1; q >= 0; --q)
                if ((spec.enc[r] >> q) & 1) {
                    uint32_t in = out.input_ref(spec.n - q);
                    ref = first ? in : out.add(kXor, ref, in);
                    first = false;
                }
            tap[r] = ref;
            have_tap[r] = 1;
        }
        return tap[r];
    };

    uint32_t acc = Circuit::kConst0;
    bool any = false;
    for (int i = 0; i < spec.seed_len(); ++i) {
        if (!seed.get(i))
            continue;
        Circuit local = linear_local_circuit(spec, i);
        // local input j reads pattern index bit set_size - j, i.e. the code
        // bit at position sets[i][set_size - j]; materialize those taps
        // before appending the local's gates so the latter stay contiguous
        std::vector<uint32_t> in_ref(local.n);
        for (int j = 1; j <= local.n; ++j)
            in_ref[j - 1] = tap_ref(spec.sets[i][spec.set_size - j]);
        uint64_t base = out.gates.size();
        auto map_ref = [&](uint32_t ref) -> uint32_t {
            if (ref < 2)
                return ref;
            if (ref < uint32_t(2 + local.n))
                return in_ref[ref - 2];
            return out.gate_ref(base + (ref - uint32_t(2 + local.n)));
        };
        for (const Gate& g : local.gates)
            out.add(g.op, map_ref(g.l), map_ref(g.r));
        uint32_t li = map_ref(local.output);
        acc = any ? out.add(kXor, acc, li) : li;
        any = true;
    }
    out.output = acc;
    return out;
}

SizeReport linear_gen_size_report(const LinearGenSpec& spec) {
    SizeReport r;
    r.measured = 0;
    r.terms = {
        {"outputs_16n", double(spec.seed_len())},
        {"set_size_ceil_10_over_delta", double(spec.set_size)},
        {"xor_stage_gates_16n_minus_1", double(spec.seed_len() - 1)},
        {"per_local_table_cap_2^set_size", std::ldexp(1.0, spec.set_size)},
    };
    return r;
}

// --------------------------------------------------------------------------
// views

namespace {
uint64_t get_bits(const uint64_t* words, int off, int len) {
    // little-endian bit run [off, off+len), len <= 57 so two words suffice
    uint64_t lo = words[off >> 6] >> (off & 63);
    int got = 64 - (off & 63);
    if (got < len)
        lo |= words[(off >> 6) + 1] << got;
    return lo & ((uint64_t{1} << len) - 1);
}
} // namespace

std::array<uint32_t, 4> quad_seed_unpack(const FieldCtx& F, const uint64_t* words) {
    std::array<uint32_t, 4> s;
    for (int i = 0; i < 4; ++i)
        s[i] = uint32_t(get_bits(words, i * F.k, F.k));
    return s;
}

namespace {

// Discrete-log tables for the view's inner loop: the scanners call bit()
// once per (seed, position), and three shift-reduce products per call
// dominate the whole subcube scan. Products through lg/ex are the same
// field elements, just O(1); the FieldCtx::mul contract (plain quadratic
// shift-reduce) is untouched. ex is laid out doubled so an index sum never
// needs reducing mod 2^k - 1.
struct LogTables {
    std::vector<uint32_t> lg; // lg[e], e != 0
    std::vector<uint32_t> ex; // ex[i] = g^i for i < 2 (2^k - 1)

    uint32_t mul(uint32_t a, uint32_t b) const {
        return a && b ? ex[lg[a] + lg[b]] : 0;
    }
};

// smallest primitive element by exhaustive order check; deterministic, and
// a one-time cost far below the scans it accelerates
std::shared_ptr<const LogTables> build_log_tables(const FieldCtx& F) {
    uint64_t group = F.order() - 1;
    auto t = std::make_shared<LogTables>();
    t->lg.assign(F.order(), 0);
    t->ex.assign(2 * group, 0);
    for (uint32_t g = 2;; ++g) {
        uint32_t e = 1;
        uint64_t i = 0;
        for (; i < group; ++i) {
            t->ex[i] = e;
            t->lg[e] = uint32_t(i);
            e = F.mul(e, g);
            if (e == 1) {
                ++i;
                break;
            }
        }
        if (i == group)
            break; // full cycle: g generates the multiplicative group
    }
    for (uint64_t i = 0; i < group; ++i)
        t->ex[group + i] = t->ex[i];
    return t;
}

// tables up to ~200 MB; beyond that the plain per-call products stand
constexpr int kLogTableMaxK = 24;

} // namespace

GenView quad_gen_view(const FieldCtx& F) {
    GenView v;
    v.seed_bits = 4 * F.k;
    v.length = F.order();
    v.enum_seeds = v.seed_bits <= 24 ? uint64_t{1} << v.seed_bits : 0;
    if (F.k <= kLogTableMaxK) {
        std::shared_ptr<const LogTables> t = build_log_tables(F);
        v.bit = [F, t](const uint64_t* w, uint64_t pos) {
            std::array<uint32_t, 4> s = quad_seed_unpack(F, w);
            uint32_t x = uint32_t(pos);
            uint32_t r = t->mul(s[3], x) ^ s[2];
            r = t->mul(r, x) ^ s[1];
            return iota(t->mul(r, x) ^ s[0]);
        };
    } else {
        v.bit = [F](const uint64_t* w, uint64_t pos) {
            return iota(F.poly_eval_deg3(quad_seed_unpack(F, w), uint32_t(pos)));
        };
    }
    return v;
}

GenView linear_gen_view(const LinearGenSpec& spec) {
    if (spec.hvec.empty())
        throw InputError("linear_gen_view: spec not finalized");
    GenView v;
    v.seed_bits = spec.seed_len();
    v.length = uint64_t{1} << spec.n;
    v.enum_seeds = 0; // 16n >= 32 bits: sampled mode only
    const LinearGenSpec* p = &spec;
    v.bit = [p](const uint64_t* w, uint64_t pos) {
        if (!p->hv_ok[pos])
            throw InputError("linear generator: unseen pattern at position " +
                             std::to_string(pos));
        uint64_t acc = 0;
        for (int j = 0; j < p->seed_words(); ++j)
            acc ^= w[j] & p->hvec[pos][j];
        return std::popcount(acc) & 1;
    };
    return v;
}

GenView inner_product_view(int n) {
    if (n < 1 || n > 24)
        throw InputError("inner_product_view: arity out of range");
    GenView v;
    v.seed_bits = n;
    v.length = uint64_t{1} << n;
    v.enum_seeds = uint64_t{1} << n;
    v.bit = [](const uint64_t* w, uint64_t pos) {
        return std::popcount(w[0] & pos) & 1;
    };
    return v;
}

// --------------------------------------------------------------------------
// testers

KwiseReport verify_kwise(const GenView& gen, int order,
                         std::vector<std::vector<uint64_t>> position_sets,
                         uint64_t sample_budget, Rng* rng) {
    if (order < 1 || order > 20)
        throw InputError("verify_kwise: order out of range");
    if (gen.length < uint64_t(order))
        throw InputError("verify_kwise: generator too short for the order");

    if (position_sets.empty()) {
        // all C(length, order) subsets, guarded
        double log2_count = 0;
        for (int i = 0; i < order; ++i)
            log2_count += std::log2(double(gen.length - i) / double(i + 1));
        if (log2_count > 20)
            throw ScaleGuard("verify_kwise: too many position sets; pass explicit ones");
        std::vector<uint64_t> idx(order);
        for (int i = 0; i < order; ++i)
            idx[i] = uint64_t(i);
        while (true) {
            position_sets.push_back(idx);
            int j = order - 1;
            while (j >= 0 && idx[j] == gen.length - uint64_t(order - j))
                --j;
            if (j < 0)
                break;
            ++idx[j];
            for (int t = j + 1; t < order; ++t)
                idx[t] = idx[t - 1] + 1;
        }
    }
    for (const auto& set : position_sets) {
        if (int(set.size()) != order)
            throw InputError("verify_kwise: a position set does not match the order");
        for (uint64_t p : set)
            if (p >= gen.length)
                throw InputError("verify_kwise: position out of range");
    }

    bool exhaustive = sample_budget == 0;
    if (exhaustive && gen.enum_seeds == 0)
        throw InputError("verify_kwise: seed space not enumerable; pass a sample budget");
    if (!exhaustive && rng == nullptr)
        throw InputError("verify_kwise: sampled mode needs an rng");

    uint64_t seeds = exhaustive ? gen.enum_seeds : sample_budget;
    size_t nsets = position_sets.size();
    size_t patterns = size_t{1} << order;
    std::vector<uint64_t> counts(nsets * patterns, 0);
    int swords = (gen.seed_bits + 63) / 64;

    if (exhaustive) {
#pragma omp parallel
        {
            std::vector<uint64_t> local(nsets * patterns, 0);
            uint64_t w[1];
#pragma omp for schedule(static)
            for (int64_t s = 0; s < int64_t(seeds); ++s) {
                w[0] = uint64_t(s);
                for (size_t t = 0; t < nsets; ++t) {
                    uint64_t pat = 0;
                    for (int j = 0; j < order; ++j)
                        pat |= uint64_t(gen.bit(w, position_sets[t][j])) << j;
                    ++local[t * patterns + pat];
                }
            }
#pragma omp critical
            for (size_t i = 0; i < counts.size(); ++i)
                counts[i] += local[i];
        }
    } else {
        // deterministic single-owner rng: draw serially
        std::vector<uint64_t> w(swords);
        for (uint64_t s = 0; s < seeds; ++s) {
            for (int j = 0; j < swords; ++j)
                w[j] = rng->u64();
            int tail = gen.seed_bits & 63;
            if (tail)
                w[swords - 1] &= (uint64_t{1} << tail) - 1;
            for (size_t t = 0; t < nsets; ++t) {
                uint64_t pat = 0;
                for (int j = 0; j < order; ++j)
                    pat |= uint64_t(gen.bit(w.data(), position_sets[t][j])) << j;
                ++counts[t * patterns + pat];
            }
        }
    }

    KwiseReport report;
    report.exhaustive = exhaustive;
    report.seeds_used = seeds;
    report.ok = true;
    double p = std::ldexp(1.0, -order);
    double mean = double(seeds) * p;
    double sd = std::sqrt(double(seeds) * p * (1.0 - p));
    for (size_t t = 0; t < nsets; ++t) {
        KwiseCheck check;
        check.positions = position_sets[t];
        check.counts.assign(counts.begin() + t * patterns, counts.begin() + (t + 1) * patterns);
        check.ok = true;
        for (uint64_t c : check.counts) {
            bool fine = exhaustive ? (c == seeds >> order)
                                   : (std::fabs(double(c) - mean) <= 5.0 * sd);
            check.ok = check.ok && fine;
        }
        report.ok = report.ok && check.ok;
        report.checks.push_back(std::move(check));
    }
    return report;
}

AnticoncResult anticoncentration_check(const GenView& gen, const std::vector<double>& v,
                                       uint64_t sample_budget, Rng* rng) {
    if (v.size() != gen.length)
        throw InputError("anticoncentration_check: weight vector length mismatch");
    bool exhaustive = sample_budget == 0;
    if (exhaustive && gen.enum_seeds == 0)
        throw InputError("anticoncentration_check: seed space not enumerable; pass a budget");
    if (!exhaustive && rng == nullptr)
        throw InputError("anticoncentration_check: sampled mode needs an rng");

    Accum s2;
    for (double x : v)
        s2.add(x * x);
    double threshold = std::sqrt(s2.value() / 3.0);

    AnticoncResult res;
    res.seeds = exhaustive ? gen.enum_seeds : sample_budget;
    uint64_t hits = 0;

    if (exhaustive) {
#pragma omp parallel for schedule(static) reduction(+ : hits)
        for (int64_t s = 0; s < int64_t(res.seeds); ++s) {
            uint64_t w[1] = {uint64_t(s)};
            double dot = 0;
            for (uint64_t i = 0; i < gen.length; ++i)
                dot += gen.bit(w, i) ? -v[i] : v[i];
            if (std::fabs(dot) >= threshold)
                ++hits;
        }
    } else {
        int swords = (gen.seed_bits + 63) / 64;
        std::vector<uint64_t> w(swords);
        for (uint64_t s = 0; s < res.seeds; ++s) {
            for (int j = 0; j < swords; ++j)
                w[j] = rng->u64();
            int tail = gen.seed_bits & 63;
            if (tail)
                w[swords - 1] &= (uint64_t{1} << tail) - 1;
            double dot = 0;
            for (uint64_t i = 0; i < gen.length; ++i)
                dot += gen.bit(w.data(), i) ? -v[i] : v[i];
            if (std::fabs(dot) >= threshold)
                ++hits;
        }
    }
    res.hits = hits;
    return res;
}

// --------------------------------------------------------------------------
// file format

namespace {
// the packed seed is 4k bits (s[i] at bit offset i*k), printed as exactly k
// hex digits, high nibble first
int packed_seed_bit(const std::array<uint32_t, 4>& s, int k, int b) {
    return (s[b / k] >> (b % k)) & 1;
}

std::string seed_to_hex(const std::array<uint32_t, 4>& s, int k) {
    std::string hex(k, '0');
    for (int d = 0; d < k; ++d) {
        int v = 0;
        for (int j = 0; j < 4; ++j)
            v = (v << 1) | packed_seed_bit(s, k, 4 * (k - d) - 1 - j);
        hex[d] = "0123456789abcdef"[v];
    }
    return hex;
}

std::array<uint32_t, 4> seed_from_hex(const std::string& hex, int k) {
    if (int(hex.size()) != k)
        throw InputError("kwgen: seed must be exactly k hex digits");
    std::array<uint32_t, 4> s = {0, 0, 0, 0};
    for (int d = 0; d < k; ++d) {
        char ch = hex[d];
        int v;
        if (ch >= '0' && ch <= '9')
            v = ch - '0';
        else if (ch >= 'a' && ch <= 'f')
            v = 10 + (ch - 'a');
        else if (ch >= 'A' && ch <= 'F')
            v = 10 + (ch - 'A');
        else
            throw InputError("kwgen: bad hex digit in seed");
        for (int j = 0; j < 4; ++j)
            if ((v >> (3 - j)) & 1) {
                int b = 4 * (k - d) - 1 - j;
                s[b / k] |= uint32_t{1} << (b % k);
            }
    }
    return s;
}
} // namespace

void kwgen_write(std::ostream& os, const QuadGenSpec& spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "KWGEN quad k=%d mod=%x seed=", spec.ctx.k, spec.ctx.modulus);
    os << buf << seed_to_hex(spec.seed, spec.ctx.k) << "\n";
}

void kwgen_write(std::ostream& os, const LinearGenSpec& spec) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "KWGEN linear n=%d m=%d delta=%.17g verified=%d\n", spec.n,
                  spec.m, spec.delta, spec.verified ? 1 : 0);
    os << buf;
    for (uint32_t row : spec.enc) {
        std::snprintf(buf, sizeof buf, "ROW %x\n", row);
        os << buf;
    }
    for (int i = 0; i < spec.seed_len(); ++i) {
        os << "SET " << i;
        for (uint16_t idx : spec.sets[i])
            os << " " << idx;
        os << "\n";
    }
    for (int i = 0; i < spec.seed_len(); ++i) {
        // sorted so identical specs serialize byte-identically
        std::vector<std::pair<uint64_t, int>> rows(spec.locals[i].begin(), spec.locals[i].end());
        std::sort(rows.begin(), rows.end());
        for (const auto& [pattern, bit] : rows) {
            std::snprintf(buf, sizeof buf, "%d %llx %d\n", i, (unsigned long long)pattern, bit);
            os << buf;
        }
    }
}

KwGenFile kwgen_read(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw InputError("kwgen: empty file");
    KwGenFile out;

    int k = 0;
    unsigned mod = 0;
    char seedhex[64] = {0};
    if (std::sscanf(line.c_str(), "KWGEN quad k=%d mod=%x seed=%63s", &k, &mod, seedhex) == 3) {
        out.is_quad = true;
        out.quad.ctx = field_from_modulus(uint32_t(mod));
        if (out.quad.ctx.k != k)
            throw InputError("kwgen: stated degree does not match the modulus");
        out.quad.seed = seed_from_hex(seedhex, k);
        return out;
    }

    int n = 0, m = 0, verified = 0;
    double delta = 0;
    if (std::sscanf(line.c_str(), "KWGEN linear n=%d m=%d delta=%lg verified=%d", &n, &m, &delta,
                    &verified) != 4)
        throw InputError("kwgen: unrecognized header '" + line + "'");
    if (n < 2 || n > 16 || m != 4 * n)
        throw InputError("kwgen: bad arity or code length");
    if (!(delta > 0.0) || delta > 1.0)
        throw InputError("kwgen: distance out of range");
    LinearGenSpec& spec = out.linear;
    out.is_quad = false;
    spec.n = n;
    spec.m = m;
    spec.delta = delta;
    spec.verified = verified != 0;
    int minw = int(std::llround(delta * m));
    if (minw < 1 || std::fabs(double(minw) / m - delta) > 1e-12)
        throw InputError("kwgen: distance is not a multiple of 1/m");
    spec.set_size = (10 * m + minw - 1) / minw;
    if (spec.set_size > 64)
        throw InputError("kwgen: set size beyond the 64-bit pattern cap");
    spec.sets.assign(spec.seed_len(), {});
    spec.locals.assign(spec.seed_len(), {});

    std::vector<char> set_seen(spec.seed_len(), 0);
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "ROW") {
            std::string h;
            unsigned row;
            if (!(ls >> h) || std::sscanf(h.c_str(), "%x", &row) != 1 || (row >> n))
                throw InputError("kwgen: bad ROW line '" + line + "'");
            if (int(spec.enc.size()) >= m)
                throw InputError("kwgen: too many ROW lines");
            spec.enc.push_back(row);
        } else if (tok == "SET") {
            int i;
            if (!(ls >> i) || i < 0 || i >= spec.seed_len() || set_seen[i])
                throw InputError("kwgen: bad SET line '" + line + "'");
            set_seen[i] = 1;
            int idx;
            while (ls >> idx) {
                if (idx < 0 || idx >= m)
                    throw InputError("kwgen: set index out of range");
                spec.sets[i].push_back(uint16_t(idx));
            }
            if (int(spec.sets[i].size()) != spec.set_size)
                throw InputError("kwgen: set size does not match ceil(10/delta)");
        } else {
            int i, bit;
            unsigned long long pattern;
            if (std::sscanf(line.c_str(), "%d %llx %d", &i, &pattern, &bit) != 3 || i < 0 ||
                i >= spec.seed_len() || (bit != 0 && bit != 1))
                throw InputError("kwgen: bad pattern line '" + line + "'");
            if (spec.set_size < 64 && pattern >> spec.set_size)
                throw InputError("kwgen: pattern has bits beyond the set size");
            spec.locals[i][pattern] = bit;
        }
    }
    if (int(spec.enc.size()) != m)
        throw InputError("kwgen: expected " + std::to_string(m) + " ROW lines");
    for (int i = 0; i < spec.seed_len(); ++i)
        if (!set_seen[i])
            throw InputError("kwgen: missing SET line for output " + std::to_string(i));
    finalize(spec);
    return out;
}

} // namespace hc
