#include "hc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "hc/error.hpp"
#include "hc/parallel.hpp"

namespace hc {

namespace {

void check_scan_args(const TruthTable& f, const Distribution& H, int ell, const GenView& gen) {
    if (H.n != f.n)
        throw InputError("subcube scan: distribution arity does not match the function");
    if (gen.length != f.size())
        throw InputError("subcube scan: generator length does not match the function");
    if (ell < 0 || ell >= f.n)
        throw InputError("subcube scan: ell must lie in [0, n-1]");
}

// raw signed block sums B_c = sum_{x in block c} H(x) (-1)^(f(x) + G(s)_x);
// the conditional sum T_c is B_c / mass_c. one compensated accumulator per
// block, blocks farmed out in parallel
std::vector<double> signed_block_sums(const TruthTable& f, const Distribution& H, int ell,
                                      const GenView& gen, const uint64_t* seed) {
    uint64_t blocks = uint64_t{1} << (f.n - ell);
    uint64_t width = uint64_t{1} << ell;
    std::vector<double> B(blocks);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < int64_t(blocks); ++c) {
        Accum b;
        uint64_t lo = uint64_t(c) * width;
        for (uint64_t y = 0; y < width; ++y) {
            uint64_t x = lo + y;
            int sign = f.at(x) ^ gen.bit(seed, x);
            b.add(sign ? -H.w[x] : H.w[x]);
        }
        B[c] = b.value();
    }
    return B;
}

// the seed-selection objective: sum_c |B_c|, which equals the achieved
// correlation E[(-1)^(f+g)] once h flips the negative blocks. serial so it
// can run inside a parallel candidate scan; block order matches
// signed_block_sums exactly, so both paths produce the same double
double corr_serial(const TruthTable& f, const Distribution& H, int ell, const GenView& gen,
                   const uint64_t* seed) {
    uint64_t blocks = uint64_t{1} << (f.n - ell);
    uint64_t width = uint64_t{1} << ell;
    Accum corr;
    for (uint64_t c = 0; c < blocks; ++c) {
        Accum b;
        for (uint64_t y = 0; y < width; ++y) {
            uint64_t x = c * width + y;
            int sign = f.at(x) ^ gen.bit(seed, x);
            b.add(sign ? -H.w[x] : H.w[x]);
        }
        corr.add(std::fabs(b.value()));
    }
    return corr.value();
}

// lexicographic compare of packed seeds, most significant word first
bool seed_less(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i])
            return a[i] < b[i];
    return false;
}

} // namespace

SubcubeStats subcube_stats(const TruthTable& f, const Distribution& H, int ell,
                           const GenView& gen, const std::vector<uint64_t>& seed) {
    check_scan_args(f, H, ell, gen);
    uint64_t blocks = uint64_t{1} << (f.n - ell);
    uint64_t width = uint64_t{1} << ell;

    SubcubeStats st;
    st.n = f.n;
    st.ell = ell;
    st.T.assign(blocks, 0.0);
    st.thresh.assign(blocks, 0.0);
    st.good.assign(blocks, 0);

    std::vector<double> B = signed_block_sums(f, H, ell, gen, seed.data());
    std::vector<double> mass(blocks);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < int64_t(blocks); ++c) {
        Accum m, q;
        uint64_t lo = uint64_t(c) * width;
        for (uint64_t y = 0; y < width; ++y) {
            m.add(H.w[lo + y]);
            q.add(H.w[lo + y] * H.w[lo + y]);
        }
        mass[c] = m.value();
        if (mass[c] > 0.0) {
            // compare at raw scale: |B| >= sqrt(Q/3) <=> |T| >= thresh
            st.good[c] = std::fabs(B[c]) >= std::sqrt(q.value() / 3.0);
            st.T[c] = B[c] / mass[c];
            st.thresh[c] = std::sqrt(q.value() / 3.0) / mass[c];
        }
    }

    Accum good, corr;
    for (uint64_t c = 0; c < blocks; ++c) {
        if (st.good[c])
            good.add(mass[c]);
        corr.add(std::fabs(B[c]));
    }
    st.goodFraction = good.value();
    st.corr = corr.value();
    return st;
}

SeedChoice select_seed(const TruthTable& f, const Distribution& H, int ell, const GenView& gen,
                       uint64_t budget, Rng& rng) {
    check_scan_args(f, H, ell, gen);
    if (budget == 0)
        throw InputError("select_seed: budget must be at least 1");

    int words = (gen.seed_bits + 63) / 64;
    bool exhaustive = gen.enum_seeds != 0 && budget >= gen.enum_seeds;
    uint64_t count = exhaustive ? gen.enum_seeds : budget;

    // candidates are drawn up front (single-owner rng, fixed order), scored
    // in parallel, then reduced serially with the deterministic tie rule
    std::vector<std::vector<uint64_t>> cand(count);
    if (exhaustive) {
        for (uint64_t s = 0; s < count; ++s)
            cand[s] = {s};
    } else if (gen.enum_seeds != 0) {
        for (auto& c : cand)
            c = {rng.below(gen.enum_seeds)};
    } else {
        int tail = gen.seed_bits % 64;
        for (auto& c : cand) {
            c.resize(words);
            for (int w = 0; w < words; ++w)
                c[w] = rng.u64();
            if (tail)
                c[words - 1] &= (uint64_t{1} << tail) - 1;
        }
    }

    std::vector<double> score(count);
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < int64_t(count); ++i)
        score[i] = corr_serial(f, H, ell, gen, cand[i].data());

    size_t best = 0;
    for (size_t i = 1; i < count; ++i)
        if (score[i] > score[best] || (score[i] == score[best] && seed_less(cand[i], cand[best])))
            best = i;

    SeedChoice out;
    out.seed = cand[best];
    out.stats = subcube_stats(f, H, ell, gen, cand[best]);
    out.seedsTried = count;
    return out;
}

TruthTable build_h(const SubcubeStats& st) {
    TruthTable h(st.n - st.ell);
    for (uint64_t c = 0; c < h.size(); ++c)
        if (st.T[c] < 0.0)
            h.set(c, 1);
    return h;
}

TruthTable build_h(const TruthTable& f, const Distribution& H, int ell, const GenView& gen,
                   const std::vector<uint64_t>& seed) {
    return build_h(subcube_stats(f, H, ell, gen, seed));
}

ApproxGen approx_gen_quad(const FieldCtx& F) {
    ApproxGen g;
    g.view = quad_gen_view(F);
    g.realize = [F](const std::vector<uint64_t>& seed) {
        return build_quad_gen_circuit(F, quad_seed_unpack(F, seed.data()));
    };
    return g;
}

ApproxGen approx_gen_linear(const LinearGenSpec& spec) {
    ApproxGen g;
    g.view = linear_gen_view(spec);
    g.realize = [spec](const std::vector<uint64_t>& seed) {
        BitVec s(spec.seed_len());
        for (int w = 0; w < spec.seed_words(); ++w)
            s.set_word(w, seed[w]);
        return linear_gen_seed_circuit(spec, s);
    };
    return g;
}

ApproxReport build_approximator(const TruthTable& f, const Distribution& H, double gamma,
                                const ApproxGen& gen, uint64_t budget, Rng& rng) {
    require_guarantee_range(gamma, f.n);
    ApproxParams p = approx_params(gamma, f.n);
    check_scan_args(f, H, p.ell, gen.view);
    if (budget == 0)
        throw InputError("build_approximator: budget must be at least 1");

    constexpr uint64_t kBudgetCap = uint64_t{1} << 14;
    uint64_t tried = 0;
    for (uint64_t b = budget;;) {
        SeedChoice sc = select_seed(f, H, p.ell, gen.view, b, rng);
        tried += sc.seedsTried;

        Circuit junta = build_junta_table(build_h(sc.stats));
        Circuit genc = gen.realize(sc.seed);
        Circuit circuit = xor_compose(lift_prefix(junta, f.n), genc);
        double achieved = agreement(f, truth_table(circuit), H);

        if (achieved >= 0.5 + gamma) {
            ApproxReport r;
            r.gamma = gamma;
            r.ell = p.ell;
            r.clamped = p.clamped;
            r.chosenSeed = sc.seed;
            r.seedsTried = tried;
            r.goodFraction = sc.stats.goodFraction;
            r.achievedAgreement = achieved;
            r.circuit = std::move(circuit);
            r.sizes.measured = r.circuit.size();
            r.sizes.terms = {
                {"junta_gates", double(junta.size())},
                {"generator_gates", double(genc.size())},
                {"xor_gates", 1.0},
            };
            return r;
        }

        bool exhausted = gen.view.enum_seeds != 0 && b >= gen.view.enum_seeds;
        if (exhausted || b >= kBudgetCap) {
            std::ostringstream msg;
            msg << "build_approximator: best agreement " << achieved << " misses 1/2+gamma = "
                << 0.5 + gamma << " after " << tried << " seeds"
                << (exhausted ? " (seed space exhausted)" : " (budget cap reached)");
            throw TargetMissed(msg.str());
        }
        b = std::min(b * 2, kBudgetCap);
    }
}

void approx_report_write(std::ostream& os, const ApproxReport& r) {
    char buf[64];
    os << "gamma = ";
    std::snprintf(buf, sizeof buf, "%.17g", r.gamma);
    os << buf << "\n";
    os << "ell = " << r.ell << "\n";
    os << "clamped = " << (r.clamped ? 1 : 0) << "\n";
    os << "chosenSeed =";
    for (uint64_t w : r.chosenSeed) {
        std::snprintf(buf, sizeof buf, " %016llx", (unsigned long long)w);
        os << buf;
    }
    os << "\n";
    os << "seedsTried = " << r.seedsTried << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", r.goodFraction);
    os << "goodFraction = " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", r.achievedAgreement);
    os << "achievedAgreement = " << buf << "\n";
    os << "size = " << r.sizes.measured << "\n";
    for (const auto& [name, v] : r.sizes.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << "size." << name << " = " << buf << "\n";
    }
}

namespace {
// ones among table indices [lo, lo+len); lo and len are multiples of a
// common power of two, so a sub-word range never straddles words
uint64_t count_ones(const TruthTable& f, uint64_t lo, uint64_t len) {
    if (len >= 64) {
        uint64_t ones = 0;
        for (uint64_t w = lo / 64; w < (lo + len) / 64; ++w)
            ones += std::popcount(f.bits.word(w));
        return ones;
    }
    uint64_t w = f.bits.word(lo / 64) >> (lo % 64);
    return std::popcount(w & ((uint64_t{1} << len) - 1));
}
} // namespace

Circuit majority_subcube_baseline(const TruthTable& f, int k) {
    if (k < 0 || k > f.n)
        throw InputError("majority_subcube_baseline: prefix width out of range");
    if (k == 0) {
        Circuit c(f.n);
        c.output = 2 * f.bits.popcount() > f.size() ? Circuit::kConst1 : Circuit::kConst0;
        return c;
    }
    uint64_t block = f.size() >> k;
    // per-prefix byte flags first: parallel writers may not share BitVec words
    std::vector<char> bit(uint64_t{1} << k);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < int64_t(bit.size()); ++c)
        bit[c] = 2 * count_ones(f, uint64_t(c) * block, block) > block;
    TruthTable maj(k);
    for (uint64_t c = 0; c < bit.size(); ++c)
        maj.set(c, bit[c]);
    return lift_prefix(build_junta_table(maj), f.n);
}

Circuit exact_subcube_baseline(const TruthTable& f, double gamma) {
    if (!(gamma > 0.0) || gamma > 0.5)
        throw InputError("exact_subcube_baseline: gamma must lie in (0, 1/2]");
    int t = int(std::floor(std::log2(1.0 / (2.0 * gamma))));
    t = std::clamp(t, 0, f.n);
    if (t == 0)
        return build_junta_table(f); // region is the whole cube

    uint64_t region = f.size() >> t;
    // cylinder table: inside the prefix-zero region the suffix value, i.e.
    // f itself; the junta builder collapses the ignored leading bits free
    TruthTable cyl(f.n);
    if (region >= 64) {
        for (uint64_t w = 0; w < f.size() / 64; ++w)
            cyl.bits.set_word(w, f.bits.word(w & (region / 64 - 1)));
    } else {
        uint64_t base = f.bits.word(0) & ((uint64_t{1} << region) - 1);
        for (uint64_t off = region; off < 64; off *= 2)
            base |= base << off;
        for (uint64_t w = 0; w < f.size() / 64; ++w)
            cyl.bits.set_word(w, base);
        if (f.size() < 64) { // single partial word
            cyl = TruthTable(f.n);
            for (uint64_t x = 0; x < f.size(); ++x)
                cyl.set(x, f.at(x & (region - 1)));
        }
    }

    uint64_t ones_in = count_ones(f, 0, region);
    uint64_t ones_out = f.bits.popcount() - ones_in;
    uint64_t zeros_out = (f.size() - region) - ones_out;
    int fill = ones_out > zeros_out ? 1 : 0;

    Circuit c = build_junta_table(cyl);
    uint32_t table_out = c.output;
    // prefix-zero test on x1..xt
    uint32_t cond;
    if (t == 1) {
        cond = c.add(kNotl, c.input_ref(1), c.input_ref(1));
    } else {
        cond = c.add(kNor, c.input_ref(1), c.input_ref(2));
        for (int j = 3; j <= t; ++j)
            cond = c.add(kNimp, cond, c.input_ref(j));
    }
    c.output = fill ? c.add(kCimp, table_out, cond)  // table | ~cond
                    : c.add(kAnd, cond, table_out);
    return c;
}

Distribution adversarial_distribution(const TruthTable& f, const Circuit& c) {
    if (c.n != f.n)
        throw InputError("adversarial_distribution: arity mismatch");
    TruthTable g = truth_table(c);
    std::vector<double> w(f.size());
    uint64_t miss = 0;
    for (uint64_t x = 0; x < f.size(); ++x)
        if (f.at(x) != g.at(x)) {
            w[x] = 1.0;
            ++miss;
        }
    if (miss == 0)
        return Distribution::uniform(f.n);
    return Distribution::normalized(f.n, std::move(w));
}

} // namespace hc
