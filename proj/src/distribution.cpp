#include "hc/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "hc/error.hpp"
#include "hc/parallel.hpp"

namespace hc {

namespace {
double exact_sum(const std::vector<double>& w) {
    Accum acc;
    for (double x : w)
        acc.add(x);
    return acc.value();
}
} // namespace

Distribution::Distribution(int n_, std::vector<double> weights) : n(n_), w(std::move(weights)) {
    if (n < 1 || n > 26)
        throw InputError("distribution arity must be in [1, 26]");
    if (w.size() != size())
        throw InputError("distribution: weight vector size mismatch");
    for (double x : w)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw InputError("distribution: negative or non-finite weight");
    double s = exact_sum(w);
    if (std::fabs(s - 1.0) > 1e-9)
        throw InputError("distribution: weights sum to " + std::to_string(s) + ", not 1");
}

Distribution Distribution::uniform(int n) {
    return Distribution(n, std::vector<double>(uint64_t{1} << n, std::ldexp(1.0, -n)));
}

Distribution Distribution::point_mass(int n, uint64_t x) {
    std::vector<double> w(uint64_t{1} << n, 0.0);
    if (x >= w.size())
        throw InputError("point_mass: index out of range");
    w[x] = 1.0;
    return Distribution(n, std::move(w));
}

Distribution Distribution::normalized(int n_, std::vector<double> weights) {
    double s = exact_sum(weights);
    if (!(s > 0.0))
        throw InputError("distribution: cannot normalize, total weight not positive");
    for (double& x : weights)
        x /= s;
    return Distribution(n_, std::move(weights));
}

Distribution Distribution::random_smooth(int n, double delta, Rng& rng) {
    if (!(delta > 0.0) || delta > 1.0)
        throw InputError("random_smooth: delta must be in (0, 1]");
    // Weights proportional to 1 + a*u, u uniform in [-1, 1]. The normalized
    // maximum is at most (1+a)/(1-a) times the mean; keep that (with slack)
    // under the smoothness cap 1/delta.
    double a = (1.0 - delta) / (1.0 + delta);
    a = std::min(a * 0.9, 0.9);
    std::vector<double> w(uint64_t{1} << n);
    for (double& x : w)
        x = 1.0 + a * (2.0 * rng.unit() - 1.0);
    Distribution H = normalized(n, std::move(w));
    if (!is_smooth(H, delta))
        throw InputError("random_smooth: construction failed smoothness check");
    return H;
}

Distribution marginal_prefix(const Distribution& H, int t) {
    if (t < 1 || t > H.n)
        throw InputError("marginal_prefix: bad prefix length");
    if (t == H.n)
        return H;
    int ell = H.n - t;
    std::vector<double> m(uint64_t{1} << t);
    for (uint64_t c = 0; c < m.size(); ++c) {
        Accum acc;
        for (uint64_t y = 0; y < (uint64_t{1} << ell); ++y)
            acc.add(H.w[(c << ell) | y]);
        m[c] = acc.value();
    }
    // Block sums of a unit total can drift by a few ulp; renormalize so the
    // constructor's 1e-9 check reflects real errors, not representation.
    return Distribution::normalized(t, std::move(m));
}

Distribution conditional_suffix(const Distribution& H, uint64_t c, int ell) {
    if (ell < 1 || ell >= H.n)
        throw InputError("conditional_suffix: bad suffix length");
    if (c >= (uint64_t{1} << (H.n - ell)))
        throw InputError("conditional_suffix: prefix out of range");
    std::vector<double> w(uint64_t{1} << ell);
    Accum acc;
    for (uint64_t y = 0; y < w.size(); ++y) {
        w[y] = H.w[(c << ell) | y];
        acc.add(w[y]);
    }
    if (!(acc.value() > 0.0))
        throw InputError("conditional_suffix: prefix has zero marginal");
    return Distribution::normalized(ell, std::move(w));
}

bool is_smooth(const Distribution& H, double delta) {
    if (!(delta > 0.0))
        throw InputError("is_smooth: delta must be positive");
    double cap = 1.0 / (delta * std::ldexp(1.0, H.n)) + 1e-12;
    for (double x : H.w)
        if (x > cap)
            return false;
    return true;
}

void dist_write(std::ostream& os, const Distribution& H) {
    os << "DIST n=" << H.n << "\n";
    std::ostringstream line;
    line.precision(17);
    for (uint64_t i = 0; i < H.size(); ++i) {
        if (H.w[i] == 0.0)
            continue;
        line.str("");
        line << i << " " << H.w[i] << "\n";
        os << line.str();
    }
}

Distribution dist_read(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw InputError("distribution: missing header");
    int n = 0;
    if (std::sscanf(header.c_str(), "DIST n=%d", &n) != 1)
        throw InputError("distribution: bad header '" + header + "'");
    if (n < 1 || n > 26)
        throw InputError("distribution: arity out of range");
    std::vector<double> w(uint64_t{1} << n, 0.0);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        uint64_t idx;
        double weight;
        if (!(ls >> idx >> weight))
            throw InputError("distribution: bad entry line '" + line + "'");
        if (idx >= w.size())
            throw InputError("distribution: index out of range in '" + line + "'");
        w[idx] = weight;
    }
    Accum acc;
    for (double x : w)
        acc.add(x);
    if (std::fabs(acc.value() - 1.0) > 1e-6)
        throw InputError("distribution: weights sum to " + std::to_string(acc.value()) +
                         "; refusing to renormalize beyond 1e-6");
    return Distribution::normalized(n, std::move(w));
}

} // namespace hc
