#include "hc/hardness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "hc/error.hpp"
#include "hc/parallel.hpp"

namespace hc {

BigInt count_circuits_bound(int n, uint64_t s) {
    if (n < 1)
        throw InputError("count_circuits_bound: need at least one input");
    BigInt base = BigInt(n + s + 2) * BigInt(n + s + 2) * 16;
    BigInt out = 1;
    for (uint64_t i = 0; i < s; ++i)
        out *= base;
    return out;
}

double count_circuits_log2(int n, uint64_t s) {
    if (s == 0)
        return 0.0;
    double base = double(n) + double(s) + 2.0;
    return double(s) * (2.0 * std::log2(base) + 4.0);
}

TailProb chernoff_tail(uint64_t trials, uint64_t threshold) {
    if (threshold > trials)
        throw InputError("chernoff_tail: threshold exceeds the trial count");
    TailProb t;
    if (trials <= (uint64_t{1} << 20)) {
        t.exact = true;
        if (threshold == 0) {
            t.log2p = 0.0;
            return t;
        }
        // log-space summation in long double; glibc's 80-bit lgammal keeps
        // the absolute error of each log2-term near 1e-12 even at 2^20
        const long double ln2 = 0.6931471805599453094172321214581766L;
        long double lgn = std::lgamma((long double)(trials + 1));
        // online log-sum-exp: M = running max exponent, S = sum of 2^(l-M)
        long double M = 0, S = 0;
        bool first = true;
        for (uint64_t i = threshold; i <= trials; ++i) {
            long double l = (lgn - std::lgamma((long double)(i + 1)) -
                             std::lgamma((long double)(trials - i + 1))) /
                            ln2;
            if (first) {
                M = l;
                S = 1;
                first = false;
            } else if (l <= M) {
                S += std::exp2(l - M);
            } else {
                S = S * std::exp2(M - l) + 1;
                M = l;
            }
        }
        t.log2p = double(M + std::log2(S) - (long double)trials);
        if (t.log2p > 0.0)
            t.log2p = 0.0; // threshold below the mean can round above 1
        return t;
    }
    t.exact = false;
    double mean = double(trials) / 2.0;
    if (double(threshold) <= mean) {
        t.log2p = 0.0; // Hoeffding says nothing below the mean
        return t;
    }
    double excess = double(threshold) - mean;
    t.log2p = -2.0 * excess * excess / double(trials) / std::log(2.0);
    return t;
}

namespace {
// integer ceil of a product that is exact for dyadic deltas and immune to
// last-ulp noise otherwise
uint64_t approx_threshold(double delta, uint64_t trials) {
    double x = (1.0 - delta) * double(trials);
    return uint64_t(std::ceil(x - 1e-9));
}
} // namespace

Certificate existence_certificate(int n, int k, uint64_t s, double delta) {
    if (k < 1 || k > n || n > 26)
        throw InputError("existence_certificate: need 1 <= k <= n <= 26");
    if (!(delta >= 0.0) || delta >= 1.0)
        throw InputError("existence_certificate: delta must lie in [0, 1)");
    Certificate c;
    c.n = n;
    c.k = k;
    c.s = s;
    c.delta = delta;
    c.circuitCountBound = count_circuits_bound(n, s);
    c.countLog2 = count_circuits_log2(n, s);
    uint64_t trials = uint64_t{1} << k;
    c.tail = chernoff_tail(trials, approx_threshold(delta, trials));
    c.productLog2 = c.countLog2 + c.tail.log2p;
    c.valid = c.productLog2 < 0.0;
    return c;
}

int min_valid_k(int n, uint64_t s, double delta, int k_lo, int k_hi) {
    k_lo = std::max(k_lo, 1);
    k_hi = std::min({k_hi, n, 26});
    for (int k = k_lo; k <= k_hi; ++k)
        if (existence_certificate(n, k, s, delta).valid)
            return k;
    return 0;
}

int default_junta_arity(int n, uint64_t s, double delta) {
    int floor_k = 1;
    if (s >= 2) {
        double bits = std::log2(8.0 * double(s) * std::log2(double(s)));
        floor_k = int(std::ceil(bits - 1e-9));
    }
    if (floor_k > n)
        return 0;
    return min_valid_k(n, s, delta, floor_k, n);
}

void cert_write(std::ostream& os, const Certificate& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c.delta);
    os << "CERT n=" << c.n << " k=" << c.k << " s=" << c.s << " delta=" << buf << "\n";
    os << "countBound = " << c.circuitCountBound << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", c.countLog2);
    os << "countBound.log2 = " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", c.tail.log2p);
    os << "tail.log2 = " << buf << "\n";
    os << "tail.exact = " << (c.tail.exact ? 1 : 0) << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", c.productLog2);
    os << "product.log2 = " << buf << "\n";
    os << "valid = " << (c.valid ? 1 : 0) << "\n";
}

Certificate cert_read(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw InputError("cert: missing header");
    Certificate c;
    unsigned long long s = 0;
    if (std::sscanf(line.c_str(), "CERT n=%d k=%d s=%llu delta=%lg", &c.n, &c.k, &s, &c.delta) != 4)
        throw InputError("cert: bad header '" + line + "'");
    c.s = s;
    auto field = [&](const char* name) -> std::string {
        if (!std::getline(is, line))
            throw InputError(std::string("cert: missing field ") + name);
        std::string prefix = std::string(name) + " = ";
        if (line.rfind(prefix, 0) != 0)
            throw InputError("cert: expected '" + prefix + "...', got '" + line + "'");
        return line.substr(prefix.size());
    };
    c.circuitCountBound = BigInt(field("countBound"));
    c.countLog2 = std::stod(field("countBound.log2"));
    c.tail.log2p = std::stod(field("tail.log2"));
    c.tail.exact = field("tail.exact") == "1";
    c.productLog2 = std::stod(field("product.log2"));
    c.valid = field("valid") == "1";
    return c;
}

HardSample sample_hard_junta(int n, uint64_t s, double delta, Rng& rng, int k) {
    if (k == 0) {
        k = default_junta_arity(n, s, delta);
        if (k == 0)
            throw InputError("sample_hard_junta: no valid junta arity k <= n; "
                             "raise n or relax (s, delta)");
    }
    if (k < 1 || k > n)
        throw InputError("sample_hard_junta: k out of range");
    HardSample out{junta_embed(TruthTable::random(k, rng), n),
                   existence_certificate(n, k, s, delta)};
    return out;
}

// --------------------------------------------------------------------------
// toy-scale oracles

namespace {

uint64_t full_mask(int n) { return (uint64_t{1} << (uint64_t{1} << n)) - 1; }

uint64_t input_mask(int n, int j) {
    uint64_t m = 0;
    for (uint64_t x = 0; x < (uint64_t{1} << n); ++x)
        if ((x >> (n - j)) & 1)
            m |= uint64_t{1} << x;
    return m;
}

uint64_t apply_op(int op, uint64_t a, uint64_t b, uint64_t full) {
    uint64_t out = 0;
    if (op & 1)
        out |= ~a & ~b;
    if (op & 2)
        out |= ~a & b;
    if (op & 4)
        out |= a & ~b;
    if (op & 8)
        out |= a & b;
    return out & full;
}

} // namespace

MinSizeTable min_size_table(int n, int maxGates) {
    if (n < 1 || n > 4 || maxGates < 0 || maxGates > 5)
        throw ScaleGuard("min_size_table: exhaustive closure supports n <= 4, maxGates <= 5");
    MinSizeTable t;
    t.n = n;
    t.maxGates = maxGates;
    uint64_t full = full_mask(n);

    std::vector<std::vector<uint64_t>> level(maxGates + 1);
    std::unordered_set<uint64_t> seen; // mirrors t.entry for the hot membership test

    auto discover = [&](uint64_t m, MinSizeEntry e, std::vector<uint64_t>& out) {
        if (seen.insert(m).second) {
            t.entry[m] = e;
            out.push_back(m);
        }
    };

    discover(0, {0, 0, 0, 0}, level[0]);
    discover(full, {0, 0, 0, 0}, level[0]);
    for (int j = 1; j <= n; ++j)
        discover(input_mask(n, j), {0, 0, 0, 0}, level[0]);
    std::sort(level[0].begin(), level[0].end());

    for (int cost = 1; cost <= maxGates; ++cost) {
        std::vector<uint64_t> fresh;
        for (int i = 0; i + i <= cost - 1; ++i) {
            int j = cost - 1 - i;
            for (uint64_t a : level[i])
                for (uint64_t b : level[j])
                    for (int op = 0; op < 16; ++op)
                        for (auto [l, r] : {std::pair{a, b}, std::pair{b, a}})
                            discover(apply_op(op, l, r, full),
                                     {cost, uint8_t(op), l, r}, fresh);
        }
        std::sort(fresh.begin(), fresh.end());
        level[cost] = std::move(fresh);
    }
    return t;
}

namespace {
uint32_t witness_ref(const MinSizeTable& t, uint64_t mask, Circuit& c) {
    if (mask == 0)
        return Circuit::kConst0;
    if (mask == full_mask(t.n))
        return Circuit::kConst1;
    for (int j = 1; j <= t.n; ++j)
        if (mask == input_mask(t.n, j))
            return c.input_ref(j);
    auto it = t.entry.find(mask);
    if (it == t.entry.end())
        throw InputError("minsize_witness: table not reachable within the budget");
    uint32_t l = witness_ref(t, it->second.l, c);
    uint32_t r = witness_ref(t, it->second.r, c);
    return c.add(it->second.op, l, r);
}
} // namespace

Circuit minsize_witness(const MinSizeTable& t, uint64_t mask) {
    Circuit c(t.n);
    c.output = witness_ref(t, mask, c);
    return c;
}

void minsize_write(std::ostream& os, const MinSizeTable& t) {
    os << "MINSIZE n=" << t.n << "\n";
    uint64_t digits = std::max<uint64_t>(1, (uint64_t{1} << t.n) / 4);
    for (const auto& [mask, e] : t.entry) {
        std::string hex(digits, '0');
        for (uint64_t d = 0; d < digits; ++d) {
            int v = 0;
            for (int b = 0; b < 4; ++b) {
                uint64_t idx = 4 * d + uint64_t(b);
                if (idx < (uint64_t{1} << t.n) && ((mask >> idx) & 1))
                    v |= 8 >> b;
            }
            hex[d] = "0123456789abcdef"[v];
        }
        os << hex << " " << e.size << "\n";
    }
}

JuntaFit best_junta_correlation(const TruthTable& f, int k, const Distribution& H) {
    if (H.n != f.n)
        throw InputError("best_junta_correlation: distribution arity mismatch");
    if (k < 1 || k > f.n)
        throw InputError("best_junta_correlation: k out of range");
    if (f.n > 16)
        throw ScaleGuard("best_junta_correlation: exhaustive search supports n <= 16");

    // enumerate k-subsets of {1..n} in lexicographic order
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i)
        cur[i] = i + 1;
    for (;;) {
        subsets.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == f.n - (k - 1 - i))
            --i;
        if (i < 0)
            break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j)
            cur[j] = cur[j - 1] + 1;
    }
    double work = double(subsets.size()) * double(f.size());
    if (work > double(uint64_t{1} << 30))
        throw ScaleGuard("best_junta_correlation: subset scan too large");

    std::vector<double> corr(subsets.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t si = 0; si < int64_t(subsets.size()); ++si) {
        const std::vector<int>& S = subsets[si];
        std::vector<Accum> W(uint64_t{1} << k);
        for (uint64_t x = 0; x < f.size(); ++x) {
            uint64_t key = 0;
            for (int i = 0; i < k; ++i)
                key |= ((x >> (f.n - S[i])) & 1) << (k - 1 - i);
            W[key].add(f.at(x) ? -H.w[x] : H.w[x]);
        }
        Accum sum;
        for (auto& w : W)
            sum.add(std::fabs(w.value()));
        corr[si] = sum.value();
    }

    size_t best = 0;
    for (size_t i = 1; i < subsets.size(); ++i)
        if (corr[i] > corr[best])
            best = i;
    return {subsets[best], corr[best]};
}

bool verify_inapprox_bruteforce(const TruthTable& f, int s, double delta) {
    if (f.n > 4 || s < 0 || s > 4)
        throw ScaleGuard("verify_inapprox_bruteforce: exhaustive check supports n <= 4, s <= 4");
    if (!(delta >= 0.0) || delta >= 1.0)
        throw InputError("verify_inapprox_bruteforce: delta must lie in [0, 1)");
    MinSizeTable t = min_size_table(f.n, s);
    uint64_t fmask = f.bits.word(0) & full_mask(f.n);
    double bound = (1.0 - delta) * double(f.size());
    for (const auto& [mask, e] : t.entry) {
        uint64_t agree = f.size() - uint64_t(std::popcount(mask ^ fmask));
        // a single table at or above (1-delta)2^n agreements refutes hardness
        if (double(agree) >= bound)
            return false;
    }
    return true;
}

} // namespace hc
