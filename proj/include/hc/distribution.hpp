#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hc/rng.hpp"

namespace hc {

// Probability distribution on {0,1}^n, stored densely (one double per
// point, same index convention as TruthTable). Dense storage caps practical
// n around 24; that is the supported desk scale.
struct Distribution {
    int n = 0;
    std::vector<double> w;

    Distribution() = default;
    // Validates: size 2^n, weights >= 0, |sum - 1| <= 1e-9.
    Distribution(int n_, std::vector<double> weights);

    uint64_t size() const { return uint64_t{1} << n; }

    static Distribution uniform(int n);
    static Distribution point_mass(int n, uint64_t x);
    // Divides by the exact (compensated) sum, then validates.
    static Distribution normalized(int n_, std::vector<double> weights);
    // Random delta-smooth distribution: every weight stays strictly below
    // 1/(delta*2^n). Draws are uniform in [1-a, 1+a] with a picked so the
    // normalized maximum cannot reach the cap.
    static Distribution random_smooth(int n, double delta, Rng& rng);
};

// Marginal of the first t bits: H'(c) = sum over the suffix block of c.
Distribution marginal_prefix(const Distribution& H, int t);

// Conditional on prefix c (length n-ell): H_c(y) = H(c.y) / H'(c).
// Requires positive marginal at c.
Distribution conditional_suffix(const Distribution& H, uint64_t c, int ell);

// Every weight <= 1/(delta*2^n) + 1e-12.
bool is_smooth(const Distribution& H, double delta);

// Text format: "DIST n=<n>" header, then "<index> <weight>" lines for the
// nonzero entries. The loader renormalizes iff |sum - 1| <= 1e-6 and
// rejects otherwise.
void dist_write(std::ostream& os, const Distribution& H);
Distribution dist_read(std::istream& is);

} // namespace hc
