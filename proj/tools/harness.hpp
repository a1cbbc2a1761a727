#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hc/approx.hpp"
#include "hc/distribution.hpp"
#include "hc/gf2k.hpp"
#include "hc/kwise.hpp"
#include "hc/truth_table.hpp"

// Plumbing shared by the subcommand drivers and their --check re-verifiers.
// Everything here is deterministic: identical RunConfig + rng seed produce
// byte-identical files and stdout, regardless of thread count.

namespace harness {

// One flat record of every flag, echoed to <out>/run.cfg so a finished run
// can be re-verified (or reproduced) from its output directory alone.
struct RunConfig {
    std::string command;
    int n = 0;
    int k = 0;          // junta arity / field degree (0 = derived)
    uint64_t s = 6000;  // adversary circuit size (gen-hard) or gate cap (enumerate)
    double gamma = 0.02;
    double delta = 0.3;
    int ell = -1; // subcube depth override (-1 = derived from gamma)
    std::string gen = "quad";
    uint64_t budget = 200; // seed candidates (0 = exhaustive where enumerable)
    uint64_t vectors = 20; // anticoncentration weight vectors
    uint64_t rng = 1;
    std::string dist = "uniform"; // uniform | adversarial | <path to DIST file>
    int advwidth = 0;             // resolved adversarial baseline width (echo)
    std::vector<double> gammas;   // size-sweep grid, scanned in the given order
    int threads = 0;              // 0 = library default
    std::string out;
    bool check = false;
};

void runcfg_write(std::ostream& os, const RunConfig& c);
RunConfig runcfg_read(std::istream& is);

// ---- file plumbing ------------------------------------------------------

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

// What one subcommand run produced: named artifact texts (written under
// --out when given), the stdout block, and the process exit status.
struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;
    std::string stdout_text;
    int status = 0;
};

// ---- shared pipeline pieces ---------------------------------------------

// H per the --dist flag: "uniform", "adversarial" (uniform over the
// mistakes of a width-`advwidth` majority-subcube baseline for f), or a
// DIST file path. Arity-checked against f.
hc::Distribution make_dist(const std::string& spec, const hc::TruthTable& f,
                           int advwidth);

// g(c) = f(c, 0, ..., 0): the k-bit prefix core of a junta.
hc::TruthTable prefix_core(const hc::TruthTable& f, int k);

// Generator family of the requested kind on nb input bits. Keeps the
// underlying field / code spec so the chosen seed can be serialized. The
// linear spec sits behind a stable pointer because the view aliases it.
struct GenBundle {
    std::string kind; // quad | linear
    hc::FieldCtx F;
    std::shared_ptr<hc::LinearGenSpec> spec;
    hc::ApproxGen gen;
};
// The linear build consumes rng (code + sets + local tables).
GenBundle make_gen(const std::string& kind, int nb, hc::Rng& rng);
// KWGEN block for the bundle; quad embeds the chosen seed, linear carries
// the full spec (its seed travels in the report).
std::string kwgen_text(const GenBundle& gb, const std::vector<uint64_t>& seed);

// Parsed form of the flat approx report block.
struct ReportFile {
    double gamma = 0.0;
    int ell = 0;
    bool clamped = false;
    std::vector<uint64_t> chosenSeed;
    uint64_t seedsTried = 0;
    double goodFraction = 0.0;
    double achievedAgreement = 0.0;
    uint64_t size = 0;
    std::map<std::string, double> terms;
};
ReportFile report_parse(const std::string& text);

// printf-style %.17g, the round-trippable float format all artifacts use
std::string g17(double v);

// ---- --check re-verifiers -----------------------------------------------
// All recompute claims from the files in `out` alone and throw
// hc::InputError on the first mismatch; they print one OK line per claim.

void check_gen_hard(const RunConfig& cfg, const std::filesystem::path& out);
void check_approximate(const RunConfig& cfg, const std::filesystem::path& out);
void check_demo_tightness(const RunConfig& cfg, const std::filesystem::path& out);
// For the report-style commands (verify-kwise, anticoncentration, enumerate,
// size-sweep) the artifact lines are the claims: re-derive every file from
// the recorded RunConfig and demand byte identity.
void check_rerun(const Artifacts& fresh, const std::filesystem::path& out);

} // namespace harness
