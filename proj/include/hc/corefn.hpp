#pragma once

#include "hc/distribution.hpp"
#include "hc/truth_table.hpp"

namespace hc {

// Pr_{x ~ H}[f(x) = g(x)]. Parallel over index blocks; deterministic
// regardless of thread count (see parallel.hpp). Exact for dyadic weights.
double agreement(const TruthTable& f, const TruthTable& g, const Distribution& H);

// Plain serial loop, kept as the reference the parallel kernel is tested
// against.
double agreement_serial(const TruthTable& f, const TruthTable& g, const Distribution& H);

// E_{x ~ H}[(-1)^f(x)] = 1 - 2 Pr[f = 1].
double bias(const TruthTable& f, const Distribution& H);

// Subcube split depth for a target correlation advantage. ell is
// floor(log2(1 / (363 gamma^2))) clamped into [0, n-1]; `clamped` reports
// whether clamping fired. The floor guarantees
// (2/11) * sqrt(1 / (3 * 2^ell)) >= 2 gamma whenever no clamping occurred.
struct ApproxParams {
    double gamma = 0.0;
    int ell = 0;
    bool clamped = false;
};

// Requires 0 < gamma < 1/2.
ApproxParams approx_params(double gamma, int n);

// The construction's guarantee is meaningful only for
// 27/2^(n/2) < gamma < 1/2; callers that promise the guarantee enforce this
// (throws InputError). approx_params itself stays callable outside the
// range so degenerate/clamped cases remain expressible.
void require_guarantee_range(double gamma, int n);

} // namespace hc
