#include "hc/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "hc/circuit.hpp"
#include "hc/error.hpp"

using namespace hc;

namespace {

// independent tail check: Pr[Bin(trials,1/2) >= threshold] summed at 50
// decimal digits with the downward recurrence C(n,i-1) = C(n,i) * i/(n-i+1)
double tail_oracle_log2(uint64_t trials, uint64_t threshold) {
    using F50 = boost::multiprecision::cpp_bin_float_50;
    F50 term = ldexp(F50(1), -int(trials)); // i = trials
    F50 sum = term;
    for (uint64_t i = trials; i > threshold; --i) {
        term = term * F50(i) / F50(trials - i + 1);
        sum += term;
    }
    return double(log2(sum));
}

uint64_t table_mask(const TruthTable& f) {
    return f.bits.word(0) & ((uint64_t{1} << f.size()) - 1);
}

TruthTable from_mask(int n, uint64_t mask) {
    TruthTable f(n);
    for (uint64_t x = 0; x < f.size(); ++x)
        f.set(x, int((mask >> x) & 1));
    return f;
}

// x1 xor x2 xor x3 xor x4 as a 16-bit table mask
constexpr uint64_t kParity4Mask = 0x6996;

} // namespace

TEST_CASE("circuit count bound") {
    CHECK(count_circuits_bound(4, 0) == 1);
    CHECK(count_circuits_log2(8, 0) == 0.0);

    // one gate: (n+s+2)^2 = 49 predecessor pairs times 16 opcodes
    CHECK(count_circuits_bound(4, 1) == 784);
    CHECK(count_circuits_bound(4, 2) == 1048576);
    CHECK(count_circuits_log2(4, 2) == 20.0);

    CHECK(count_circuits_bound(5, 3) > count_circuits_bound(4, 3));
    CHECK(count_circuits_bound(4, 4) > count_circuits_bound(4, 3));

    // the double log tracks the exact integer's bit length
    BigInt b = count_circuits_bound(22, 100);
    CHECK(boost::multiprecision::msb(b) ==
          uint64_t(std::floor(count_circuits_log2(22, 100))));
    CHECK(count_circuits_log2(22, 6000) ==
          doctest::Approx(174678.07265606313).epsilon(1e-12));

    CHECK_THROWS_AS(count_circuits_bound(0, 3), InputError);
}

TEST_CASE("binomial tail, exact regime") {
    // Bin(4): Pr[>=2] = 11/16, Pr[>=3] = 5/16
    CHECK(std::exp2(chernoff_tail(4, 2).log2p) == doctest::Approx(11.0 / 16).epsilon(1e-12));
    CHECK(std::exp2(chernoff_tail(4, 3).log2p) == doctest::Approx(5.0 / 16).epsilon(1e-12));

    // Bin(16): sum C(16, 12..16) = 2517, sum C(16, 8..16) = 39203
    TailProb t = chernoff_tail(16, 12);
    CHECK(t.exact);
    CHECK(std::exp2(t.log2p) == doctest::Approx(2517.0 / 65536).epsilon(1e-12));
    CHECK(std::exp2(chernoff_tail(16, 8).log2p) ==
          doctest::Approx(39203.0 / 65536).epsilon(1e-12));

    CHECK(std::exp2(chernoff_tail(100, 60).log2p) ==
          doctest::Approx(0.028443966820490395).epsilon(1e-12));

    // degenerate thresholds
    CHECK(chernoff_tail(16, 0).log2p == 0.0);
    CHECK(chernoff_tail(16, 16).log2p == doctest::Approx(-16.0).epsilon(1e-12));
    CHECK_THROWS_AS(chernoff_tail(8, 9), InputError);

    // largest exact size: one-sigma-ish and deep thresholds
    CHECK(chernoff_tail(uint64_t{1} << 20, (uint64_t{1} << 19) + 1024).log2p ==
          doctest::Approx(-5.4546399350155088).epsilon(1e-12));
    TailProb deep = chernoff_tail(uint64_t{1} << 20, 734004);
    CHECK(deep.exact);
    CHECK(deep.log2p == doctest::Approx(-124485.88459654347).epsilon(1e-12));
}

TEST_CASE("binomial tail vs the high-precision oracle") {
    const std::pair<uint64_t, uint64_t> cases[] = {
        {16, 12},
        {100, 60},
        {2048, 1536},
        {4096, 3687},
        {uint64_t{1} << 20, (uint64_t{1} << 19) + 1024},
        {uint64_t{1} << 20, 734004},
    };
    for (auto [trials, threshold] : cases) {
        double impl = chernoff_tail(trials, threshold).log2p;
        double ref = tail_oracle_log2(trials, threshold);
        // 1e-9 absolute in log2 is well under 1e-9 relative on p itself
        CHECK(std::fabs(impl - ref) <= 1e-9);
    }
}

TEST_CASE("binomial tail, large-trials bound") {
    TailProb t = chernoff_tail(uint64_t{1} << 21, 1468007);
    CHECK_FALSE(t.exact);
    CHECK(t.log2p == doctest::Approx(-242044.75572534464).epsilon(1e-12));

    // at or below the mean the bound degrades to the trivial 1
    CHECK(chernoff_tail(uint64_t{1} << 21, uint64_t{1} << 20).log2p == 0.0);
    TailProb just = chernoff_tail(uint64_t{1} << 21, (uint64_t{1} << 20) + 1);
    CHECK(just.log2p < 0.0);
    CHECK(just.log2p > -1e-5);
}

TEST_CASE("existence certificate on the demo parameters") {
    // n=22, s=6000, delta=0.3: arity 20 falls short, 21 closes the union bound
    Certificate c20 = existence_certificate(22, 20, 6000, 0.3);
    CHECK(c20.countLog2 == doctest::Approx(174678.07265606313).epsilon(1e-12));
    CHECK(boost::multiprecision::msb(c20.circuitCountBound) == 174678);
    CHECK(c20.tail.exact);
    CHECK(c20.tail.log2p == doctest::Approx(-124485.88459654347).epsilon(1e-12));
    CHECK(c20.productLog2 == doctest::Approx(50192.188059519656).epsilon(1e-9));
    CHECK_FALSE(c20.valid);

    Certificate c21 = existence_certificate(22, 21, 6000, 0.3);
    CHECK_FALSE(c21.tail.exact);
    CHECK(c21.tail.log2p == doctest::Approx(-242044.75572534464).epsilon(1e-12));
    CHECK(c21.productLog2 == doctest::Approx(-67366.683069281513).epsilon(1e-9));
    CHECK(c21.valid);

    // delta at or past 1/2 puts the threshold at the mean: nothing survives
    CHECK_FALSE(existence_certificate(26, 20, 1, 0.5).valid);

    CHECK_THROWS_AS(existence_certificate(27, 5, 2, 0.25), InputError);
    CHECK_THROWS_AS(existence_certificate(8, 0, 2, 0.25), InputError);
    CHECK_THROWS_AS(existence_certificate(8, 9, 2, 0.25), InputError);
    CHECK_THROWS_AS(existence_certificate(8, 4, 2, 1.0), InputError);
    CHECK_THROWS_AS(existence_certificate(8, 4, 2, -0.1), InputError);
}

TEST_CASE("smallest valid arity and the sampler default") {
    CHECK(min_valid_k(26, 64, 0.1) == 11);
    CHECK(min_valid_k(26, 64, 0.25) == 13);
    CHECK(min_valid_k(26, 16, 0.25) == 11);
    CHECK(min_valid_k(26, 2, 0.25) == 8);
    CHECK(min_valid_k(26, 6000, 0.3) == 21);
    CHECK(min_valid_k(4, 2, 0.25) == 0); // nothing valid fits in n=4

    CHECK(default_junta_arity(26, 2, 0.25) == 8);
    CHECK(default_junta_arity(26, 16, 0.25) == 11);
    CHECK(default_junta_arity(26, 64, 0.25) == 13);
    CHECK(default_junta_arity(22, 6000, 0.3) == 21);
    CHECK(default_junta_arity(16, 16, 0.25) == 11);
    // at n=16 the count bound is smaller, so arity 7 already closes it
    CHECK(default_junta_arity(16, 2, 0.25) == 7);
    CHECK(default_junta_arity(4, 2, 0.25) == 0);
    // arity floor 20 does not fit in n=10 at all
    CHECK(default_junta_arity(10, 6000, 0.3) == 0);
}

TEST_CASE("certificates at the arity floor alone are not valid") {
    // 2^k ~ 8 s log2 s leaves the product positive by a wide margin; the
    // sampler has to keep raising k until the tail wins
    struct Case {
        uint64_t s;
        int k;
        double atLeast;
    } cases[] = {{16, 9, 100.0}, {64, 12, 300.0}, {256, 14, 2000.0}};
    for (const Case& cs : cases) {
        Certificate c = existence_certificate(26, cs.k, cs.s, 0.25);
        CHECK_FALSE(c.valid);
        CHECK(c.productLog2 > cs.atLeast);
    }
    // same shape at the demo scale: floor arity 20, still short by ~50k bits
    Certificate c = existence_certificate(26, 20, 6000, 0.3);
    CHECK_FALSE(c.valid);
    CHECK(c.productLog2 > 50000.0);
}

TEST_CASE("certificate text block") {
    SUBCASE("golden text") {
        Certificate c = existence_certificate(4, 2, 2, 0.25);
        std::ostringstream os;
        cert_write(os, c);
        CHECK(os.str() == "CERT n=4 k=2 s=2 delta=0.25\n"
                          "countBound = 1048576\n"
                          "countBound.log2 = 20\n"
                          "tail.log2 = -1.6780719051126376\n"
                          "tail.exact = 1\n"
                          "product.log2 = 18.321928094887362\n"
                          "valid = 0\n");
    }
    SUBCASE("round trip at the demo scale") {
        Certificate c = existence_certificate(22, 21, 6000, 0.3);
        std::ostringstream os;
        cert_write(os, c);
        std::istringstream is(os.str());
        Certificate d = cert_read(is);
        CHECK(d.n == c.n);
        CHECK(d.k == c.k);
        CHECK(d.s == c.s);
        CHECK(d.delta == c.delta);
        CHECK(d.circuitCountBound == c.circuitCountBound);
        CHECK(d.countLog2 == c.countLog2);
        CHECK(d.tail.log2p == c.tail.log2p);
        CHECK(d.tail.exact == c.tail.exact);
        CHECK(d.productLog2 == c.productLog2);
        CHECK(d.valid == c.valid);
    }
    SUBCASE("malformed text is rejected") {
        auto reject = [](const std::string& text) {
            std::istringstream is(text);
            CHECK_THROWS_AS(cert_read(is), InputError);
        };
        reject("");
        reject("CERT n=4 k=2 s=2\ncountBound = 1\n");
        reject("CERT n=4 k=2 s=2 delta=0.25\nwrongField = 1\n");
        reject("CERT n=4 k=2 s=2 delta=0.25\ncountBound = 1048576\n"); // truncated
    }
}

TEST_CASE("hard-instance sampler") {
    SUBCASE("reproducible from the seed") {
        Rng a(7), b(7);
        HardSample x = sample_hard_junta(12, 16, 0.25, a);
        HardSample y = sample_hard_junta(12, 16, 0.25, b);
        CHECK(x.f == y.f);
        CHECK(x.cert.k == y.cert.k);
        CHECK(x.cert.productLog2 == y.cert.productLog2);
    }
    SUBCASE("default arity and junta structure") {
        Rng rng(9);
        HardSample h = sample_hard_junta(16, 2, 0.25, rng);
        CHECK(h.cert.k == 7);
        CHECK(h.cert.valid);
        CHECK(h.f.n == 16);
        // the table only reads the 7-bit prefix: the 9 suffix bits are inert
        bool junta = true;
        for (uint64_t x = 0; x < h.f.size(); ++x)
            junta = junta && h.f.at(x) == h.f.at(x & ~uint64_t{0x1ff});
        CHECK(junta);
    }
    SUBCASE("no valid arity fits") {
        Rng rng(1);
        CHECK_THROWS_AS(sample_hard_junta(4, 2, 0.25, rng), InputError);
    }
    SUBCASE("explicit arity is honored even without a certificate") {
        Rng rng(5);
        HardSample h = sample_hard_junta(4, 2, 0.25, rng, 4);
        CHECK(h.cert.k == 4);
        CHECK_FALSE(h.cert.valid);
        CHECK(h.cert.productLog2 > 0.0);
        CHECK(h.f.n == 4);
    }
    SUBCASE("explicit arity is still validated") {
        Rng rng(5);
        CHECK_THROWS_AS(sample_hard_junta(4, 2, 0.25, rng, 5), InputError);
        CHECK_THROWS_AS(sample_hard_junta(4, 2, 0.25, rng, -1), InputError);
    }
    SUBCASE("core bias concentrates like a random table") {
        Rng rng(11);
        int within = 0;
        for (int rep = 0; rep < 100; ++rep) {
            HardSample h = sample_hard_junta(16, 16, 0.25, rng);
            REQUIRE(h.cert.k == 11);
            uint64_t ones = 0;
            for (uint64_t c = 0; c < (uint64_t{1} << 11); ++c)
                ones += uint64_t(h.f.at(c << 5));
            double bias = double(ones) / double(uint64_t{1} << 11) - 0.5;
            if (std::fabs(bias) <= 5.0 * std::exp2(-5.5))
                ++within;
        }
        CHECK(within >= 99);
    }
}

TEST_CASE("minimum-size closure counts") {
    MinSizeTable t = min_size_table(4, 5);
    CHECK(t.n == 4);
    CHECK(t.maxGates == 5);
    // cumulative reachable tables by gate budget
    std::map<int, uint64_t> cum;
    for (const auto& [mask, e] : t.entry) {
        CHECK(e.size <= 5);
        for (int b = e.size; b <= 5; ++b)
            cum[b] += 1;
    }
    CHECK(cum[0] == 6);
    CHECK(cum[1] == 70);
    CHECK(cum[2] == 526);
    CHECK(cum[3] == 3000);
    CHECK(cum[4] == 13624);
    CHECK(cum[5] == 37808);
    CHECK(t.entry.size() == 37808);

    // parity of all four inputs needs exactly three gates
    CHECK(t.entry.at(kParity4Mask).size == 3);
    CHECK(min_size_table(4, 2).entry.count(kParity4Mask) == 0);
}

TEST_CASE("closure is consistent across budgets") {
    MinSizeTable small = min_size_table(4, 2);
    MinSizeTable big = min_size_table(4, 4);
    CHECK(small.entry.size() == 526);
    for (const auto& [mask, e] : small.entry) {
        auto it = big.entry.find(mask);
        REQUIRE(it != big.entry.end());
        CHECK(it->second.size == e.size);
    }
}

TEST_CASE("two-variable closure is complete at one gate") {
    MinSizeTable t = min_size_table(2, 1);
    CHECK(t.entry.size() == 16);
    CHECK(t.entry.at(0x0).size == 0);
    CHECK(t.entry.at(0xF).size == 0);
    CHECK(t.entry.at(0xC).size == 0); // x1
    CHECK(t.entry.at(0xA).size == 0); // x2
    CHECK(t.entry.at(0x6).size == 1); // x1 xor x2
    for (const auto& [mask, e] : t.entry)
        CHECK(e.size <= 1);

    std::ostringstream os;
    minsize_write(os, t);
    CHECK(os.str() == "MINSIZE n=2\n"
                      "0 0\n"
                      "8 1\n"
                      "4 1\n"
                      "c 1\n"
                      "2 1\n"
                      "a 1\n"
                      "6 1\n"
                      "e 1\n"
                      "1 1\n"
                      "9 1\n"
                      "5 0\n"
                      "d 1\n"
                      "3 0\n"
                      "b 1\n"
                      "7 1\n"
                      "f 0\n");
}

TEST_CASE("single-variable closure") {
    MinSizeTable t = min_size_table(1, 1);
    CHECK(t.entry.size() == 4);
    CHECK(t.entry.at(0x2).size == 0); // x1
    CHECK(t.entry.at(0x1).size == 1); // not x1
}

TEST_CASE("witness circuits re-evaluate to their tables") {
    MinSizeTable t = min_size_table(4, 3);
    for (const auto& [mask, e] : t.entry) {
        Circuit c = minsize_witness(t, mask);
        CHECK(c.n == 4);
        // the tree model re-counts shared operands, so the rebuilt circuit
        // has exactly the claimed number of gates
        CHECK(c.gates.size() == uint64_t(e.size));
        CHECK(table_mask(truth_table(c)) == mask);
    }
    // leaves come back as bare references
    CHECK(minsize_witness(t, 0).output == Circuit::kConst0);
    CHECK(minsize_witness(t, 0xFFFF).output == Circuit::kConst1);
    Circuit x1 = minsize_witness(t, 0xFF00);
    CHECK(x1.gates.empty());
    CHECK(x1.output == x1.input_ref(1));

    CHECK_THROWS_AS(minsize_witness(min_size_table(4, 1), kParity4Mask), InputError);
}

TEST_CASE("closure scale guards") {
    CHECK_THROWS_AS(min_size_table(5, 1), ScaleGuard);
    CHECK_THROWS_AS(min_size_table(0, 1), ScaleGuard);
    CHECK_THROWS_AS(min_size_table(4, 6), ScaleGuard);
    CHECK_THROWS_AS(min_size_table(4, -1), ScaleGuard);
}

TEST_CASE("best junta fit") {
    Distribution u8 = Distribution::uniform(8);
    SUBCASE("parity correlates with nothing smaller") {
        TruthTable f = TruthTable::parity(8);
        for (int k : {1, 3, 7})
            CHECK(best_junta_correlation(f, k, u8).corr == 0.0);
    }
    SUBCASE("planted prefix junta is recovered") {
        TruthTable f = junta_embed(TruthTable::parity(3), 8);
        JuntaFit fit = best_junta_correlation(f, 3, u8);
        CHECK(fit.corr == 1.0);
        CHECK(fit.vars == std::vector<int>{1, 2, 3});
    }
    SUBCASE("planted pair away from the prefix") {
        TruthTable f(6);
        for (uint64_t x = 0; x < f.size(); ++x)
            f.set(x, int((x >> 4) & (x >> 1) & 1)); // x2 and x5
        JuntaFit fit = best_junta_correlation(f, 2, Distribution::uniform(6));
        CHECK(fit.corr == 1.0);
        CHECK(fit.vars == std::vector<int>{2, 5});
    }
    SUBCASE("ties keep the first subset") {
        JuntaFit fit = best_junta_correlation(TruthTable::constant(4, 0), 2,
                                              Distribution::uniform(4));
        CHECK(fit.corr == 1.0);
        CHECK(fit.vars == std::vector<int>{1, 2});
    }
    SUBCASE("a point mass is matched exactly by any subset") {
        Rng rng(3);
        TruthTable f = TruthTable::random(6, rng);
        JuntaFit fit = best_junta_correlation(f, 2, Distribution::point_mass(6, 37));
        CHECK(fit.corr == 1.0);
        CHECK(fit.vars == std::vector<int>{1, 2});
    }
    SUBCASE("matches a direct scan over subsets and tables") {
        Rng rng(17);
        TruthTable f = TruthTable::random(8, rng);
        Distribution H = Distribution::random_smooth(8, 0.5, rng);
        JuntaFit fit = best_junta_correlation(f, 2, H);
        double best = 0.0;
        for (int v1 = 1; v1 <= 8; ++v1)
            for (int v2 = v1 + 1; v2 <= 8; ++v2)
                for (int table = 0; table < 16; ++table) {
                    double e = 0.0;
                    for (uint64_t x = 0; x < f.size(); ++x) {
                        int key = int((x >> (8 - v1)) & 1) * 2 + int((x >> (8 - v2)) & 1);
                        int g = (table >> key) & 1;
                        e += (f.at(x) ^ g) ? -H.w[x] : H.w[x];
                    }
                    best = std::max(best, e);
                }
        CHECK(fit.corr == doctest::Approx(best).epsilon(1e-12));
    }
    SUBCASE("validation and scale guards") {
        TruthTable f = TruthTable::parity(8);
        CHECK_THROWS_AS(best_junta_correlation(f, 0, u8), InputError);
        CHECK_THROWS_AS(best_junta_correlation(f, 9, u8), InputError);
        CHECK_THROWS_AS(best_junta_correlation(f, 2, Distribution::uniform(7)), InputError);
        CHECK_THROWS_AS(
            best_junta_correlation(TruthTable(17), 1, Distribution::uniform(17)),
            ScaleGuard);
    }
}

TEST_CASE("inapproximability verdicts on the parity table") {
    TruthTable f = from_mask(4, kParity4Mask);
    // no 1- or 2-gate table agrees with 4-bit parity on more than 8 inputs
    CHECK(verify_inapprox_bruteforce(f, 1, 0.3));
    CHECK(verify_inapprox_bruteforce(f, 2, 0.3));
    // the comparison is strict: 8 agreements meet the (1-1/2)*16 bar exactly
    CHECK_FALSE(verify_inapprox_bruteforce(f, 2, 0.5));
    // three gates synthesize parity outright
    CHECK_FALSE(verify_inapprox_bruteforce(f, 3, 0.3));
    CHECK(verify_inapprox_bruteforce(f, 2, 0.0));
    CHECK_FALSE(verify_inapprox_bruteforce(f, 3, 0.0));

    CHECK_THROWS_AS(verify_inapprox_bruteforce(TruthTable(5), 2, 0.1), ScaleGuard);
    CHECK_THROWS_AS(verify_inapprox_bruteforce(f, 5, 0.1), ScaleGuard);
    CHECK_THROWS_AS(verify_inapprox_bruteforce(f, 2, 1.0), InputError);
    CHECK_THROWS_AS(verify_inapprox_bruteforce(f, 2, -0.1), InputError);
}

TEST_CASE("delta zero means exact-synthesis reachability") {
    MinSizeTable t = min_size_table(4, 2);
    Rng rng(29);
    for (int rep = 0; rep < 40; ++rep) {
        uint64_t mask = rng.bits(16);
        bool hard = verify_inapprox_bruteforce(from_mask(4, mask), 2, 0.0);
        CHECK(hard == (t.entry.count(mask) == 0));
    }
}

TEST_CASE("population counts at two gates") {
    // exhaustive statistics over all 2^16 tables against the 526-table
    // closure; the unit under test is spot-checked against them
    MinSizeTable t = min_size_table(4, 2);
    std::vector<uint64_t> reach;
    for (const auto& [mask, e] : t.entry)
        reach.push_back(mask);
    REQUIRE(reach.size() == 526);

    std::map<int, uint64_t> hist;
    uint64_t strict = 0, lenient = 0;
    std::vector<int> bestAgree(1 << 16);
    for (uint64_t f = 0; f < (1 << 16); ++f) {
        int best = 0;
        for (uint64_t m : reach)
            best = std::max(best, 16 - std::popcount(uint32_t(m ^ f)));
        bestAgree[f] = best;
        hist[best] += 1;
        if (best < 12)
            ++strict; // agree < (1 - 1/4) * 16 on every reachable table
        if (best <= 12)
            ++lenient;
    }
    CHECK(hist == std::map<int, uint64_t>{{8, 2},
                                          {9, 32},
                                          {10, 240},
                                          {11, 2016},
                                          {12, 13008},
                                          {13, 25120},
                                          {14, 18992},
                                          {15, 5600},
                                          {16, 526}});
    CHECK(strict == 2290);
    CHECK(lenient == 15298);

    Rng rng(41);
    for (int rep = 0; rep < 48; ++rep) {
        uint64_t mask = rng.bits(16);
        CHECK(verify_inapprox_bruteforce(from_mask(4, mask), 2, 0.25) ==
              (bestAgree[mask] < 12));
    }
    // the two tables farthest from the closure (agreement 8 everywhere)
    std::vector<uint64_t> hardest;
    for (uint64_t f = 0; f < (1 << 16); ++f)
        if (bestAgree[f] == 8)
            hardest.push_back(f);
    REQUIRE(hardest.size() == 2);
    CHECK(hardest[0] == kParity4Mask);
    CHECK(hardest[1] == (kParity4Mask ^ 0xFFFF));
    for (uint64_t f : hardest)
        CHECK(verify_inapprox_bruteforce(from_mask(4, f), 2, 0.25));
}
