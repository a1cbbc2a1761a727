#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace hc {

// Neumaier compensated accumulator. Used for all weighted sums so that
// results are reproducible to the last bit and dyadic weights (uniform
// distributions) sum exactly.
struct Accum {
    double s = 0.0, c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

namespace par {

// Block size for deterministic parallel reductions. Partial sums are
// computed per block (possibly on different threads) and merged serially
// in block order, so the result does not depend on the thread count.
inline constexpr uint64_t kBlock = uint64_t{1} << 14;

// block_fn(lo, hi) -> double partial over [lo, hi).
template <class F>
double block_sum(uint64_t n, F&& block_fn) {
    if (n == 0)
        return 0.0;
    uint64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> part(nblocks);
#pragma omp parallel for schedule(static)
    for (int64_t b = 0; b < int64_t(nblocks); ++b) {
        uint64_t lo = uint64_t(b) * kBlock;
        uint64_t hi = lo + kBlock < n ? lo + kBlock : n;
        part[b] = block_fn(lo, hi);
    }
    Accum acc;
    for (double p : part)
        acc.add(p);
    return acc.value();
}

} // namespace par
} // namespace hc
