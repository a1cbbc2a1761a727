#pragma once

#include <cstdint>
#include <vector>

#include "hc/circuit.hpp"
#include "hc/corefn.hpp"
#include "hc/distribution.hpp"
#include "hc/kwise.hpp"
#include "hc/truth_table.hpp"

namespace hc {

// Subcube-correlation scan for one generator seed. The cube splits into
// 2^(n-ell) contiguous blocks of 2^ell points (prefix c indexes the block);
// for each block we track the conditional signed sum
//   T_c = sum_y H_c(y) * (-1)^(f(c.y) + G(s)_{c.y})
// and flag the block good when |T_c| clears the anticoncentration threshold
// sqrt(sum_y H_c(y)^2 / 3). Blocks with zero mass get T = thresh = 0 and are
// never flagged.
struct SubcubeStats {
    int n = 0;
    int ell = 0;
    std::vector<double> T;
    std::vector<double> thresh;
    std::vector<uint8_t> good;
    // mass-weighted fraction of good blocks, E_{c~H'}[I_c]
    double goodFraction = 0.0;
    // sum_c H'(c) |T_c|; equals E_{x~H}[(-1)^(f+g)] for the sign-corrected
    // approximator g = h xor G(s)
    double corr = 0.0;
};

// Requires 0 <= ell <= n-1 and a generator of length 2^n. Exact block sums
// (compensated), parallel over blocks.
SubcubeStats subcube_stats(const TruthTable& f, const Distribution& H, int ell,
                           const GenView& gen, const std::vector<uint64_t>& seed);

struct SeedChoice {
    std::vector<uint64_t> seed;
    SubcubeStats stats;
    uint64_t seedsTried = 0;
};

// Scans seed candidates and keeps the one with the largest corr (ties break
// toward the numerically smaller seed). A budget covering the whole seed
// space switches to exhaustive enumeration; otherwise `budget` candidates
// are drawn from rng. Candidates are scored in parallel; the draw order and
// the tie rule make the result thread-count independent.
SeedChoice select_seed(const TruthTable& f, const Distribution& H, int ell,
                       const GenView& gen, uint64_t budget, Rng& rng);

// Sign-correction table on n-ell bits: h(c) = 1 iff T_c < 0. Zero sums --
// including empty blocks -- stay 0.
TruthTable build_h(const SubcubeStats& st);
TruthTable build_h(const TruthTable& f, const Distribution& H, int ell,
                   const GenView& gen, const std::vector<uint64_t>& seed);

// A generator family the approximator can both scan (view) and hand out as
// a circuit once a seed is fixed.
struct ApproxGen {
    GenView view;
    std::function<Circuit(const std::vector<uint64_t>& seed)> realize;
};

ApproxGen approx_gen_quad(const FieldCtx& F);
// Realization composes the local tables with parity taps; guarded by the
// same dense-table limit as linear_local_circuit.
ApproxGen approx_gen_linear(const LinearGenSpec& spec);

struct ApproxReport {
    double gamma = 0.0;
    int ell = 0;
    bool clamped = false;
    std::vector<uint64_t> chosenSeed;
    uint64_t seedsTried = 0;
    double goodFraction = 0.0;
    double achievedAgreement = 0.0;
    Circuit circuit;
    SizeReport sizes;
};

// End-to-end approximator: pick a seed, build the sign table h, emit
// lift(junta(h)) xor generator-circuit, then recompute the agreement from
// the emitted circuit's truth table and assert it reaches 1/2 + gamma.
// Misses retry with a doubled seed budget up to 2^14 before giving up
// (TargetMissed). Requires the guarantee range 27/2^(n/2) < gamma < 1/2.
ApproxReport build_approximator(const TruthTable& f, const Distribution& H,
                                double gamma, const ApproxGen& gen,
                                uint64_t budget, Rng& rng);

// Flat `key = value` block (everything but the circuit, which travels as a
// netlist next to it).
void approx_report_write(std::ostream& os, const ApproxReport& r);

// Majority vote per prefix subcube: a circuit on the first k bits whose
// value on prefix c is the uniform-majority bit of f's block (ties -> 0),
// lifted back to n inputs.
Circuit majority_subcube_baseline(const TruthTable& f, int k);

// Exact table on the prefix-zero region of about 2*gamma*2^n points, best
// constant elsewhere. The region fixes t = floor(log2(1/(2 gamma))) leading
// bits (floor, so the region always covers >= 2*gamma*2^n points), capped
// at n. Uniform agreement is at least 1/2 + gamma by construction.
Circuit exact_subcube_baseline(const TruthTable& f, double gamma);

// Uniform distribution on {x : c(x) != f(x)}; uniform on everything when
// the circuit is exact. Any approximator scores 0 under it unless the
// disagreement set is empty.
Distribution adversarial_distribution(const TruthTable& f, const Circuit& c);

} // namespace hc
