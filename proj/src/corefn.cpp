#include "hc/corefn.hpp"

#include <cmath>

#include "hc/error.hpp"
#include "hc/parallel.hpp"

namespace hc {

namespace {
void check_compatible(const TruthTable& f, const TruthTable& g, const Distribution& H) {
    if (f.n != g.n || f.n != H.n)
        throw InputError("agreement: arity mismatch");
}
} // namespace

double agreement(const TruthTable& f, const TruthTable& g, const Distribution& H) {
    check_compatible(f, g, H);
    const double* w = H.w.data();
    return par::block_sum(f.size(), [&](uint64_t lo, uint64_t hi) {
        Accum acc;
        for (uint64_t i = lo; i < hi; ++i) {
            uint64_t eq = (f.bits.word(i >> 6) ^ g.bits.word(i >> 6)) >> (i & 63);
            acc.add(w[i] * double(~eq & 1));
        }
        return acc.value();
    });
}

double agreement_serial(const TruthTable& f, const TruthTable& g, const Distribution& H) {
    check_compatible(f, g, H);
    Accum acc;
    for (uint64_t i = 0; i < f.size(); ++i)
        if (f.at(i) == g.at(i))
            acc.add(H.w[i]);
    return acc.value();
}

double bias(const TruthTable& f, const Distribution& H) {
    if (f.n != H.n)
        throw InputError("bias: arity mismatch");
    double ones = par::block_sum(f.size(), [&](uint64_t lo, uint64_t hi) {
        Accum acc;
        for (uint64_t i = lo; i < hi; ++i)
            acc.add(H.w[i] * double(f.at(i)));
        return acc.value();
    });
    return 1.0 - 2.0 * ones;
}

ApproxParams approx_params(double gamma, int n) {
    if (!(gamma > 0.0) || !(gamma < 0.5))
        throw InputError("approx_params: gamma must lie in (0, 1/2)");
    if (n < 1 || n > 26)
        throw InputError("approx_params: arity out of range");
    double raw = std::floor(std::log2(1.0 / (363.0 * gamma * gamma)));
    ApproxParams p;
    p.gamma = gamma;
    if (raw < 0.0) {
        p.ell = 0;
        p.clamped = true;
    } else if (raw > double(n - 1)) {
        p.ell = n - 1;
        p.clamped = true;
    } else {
        p.ell = int(raw);
        p.clamped = false;
    }
    return p;
}

void require_guarantee_range(double gamma, int n) {
    double lo = 27.0 / std::exp2(0.5 * n);
    if (!(gamma > lo) || !(gamma < 0.5))
        throw InputError("gamma outside the guaranteed range (27/2^(n/2), 1/2) for n = " +
                         std::to_string(n));
}

} // namespace hc
