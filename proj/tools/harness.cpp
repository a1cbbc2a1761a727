#include "harness.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hc/circuit.hpp"
#include "hc/corefn.hpp"
#include "hc/error.hpp"
#include "hc/hardness.hpp"

namespace harness {

using namespace hc;
namespace fs = std::filesystem;

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- strict number parsing (whole token must be consumed) -----------------

namespace {

int to_int(const std::string& s) {
    try {
        size_t p = 0;
        int v = std::stoi(s, &p);
        if (p == s.size()) return v;
    } catch (...) {
    }
    throw InputError("bad integer '" + s + "'");
}

uint64_t to_u64(const std::string& s) {
    try {
        size_t p = 0;
        unsigned long long v = std::stoull(s, &p);
        if (p == s.size() && s[0] != '-') return v;
    } catch (...) {
    }
    throw InputError("bad count '" + s + "'");
}

double to_dbl(const std::string& s) {
    try {
        size_t p = 0;
        double v = std::stod(s, &p);
        if (p == s.size()) return v;
    } catch (...) {
    }
    throw InputError("bad number '" + s + "'");
}

uint64_t to_hex64(const std::string& s) {
    try {
        size_t p = 0;
        unsigned long long v = std::stoull(s, &p, 16);
        if (p == s.size()) return v;
    } catch (...) {
    }
    throw InputError("bad hex word '" + s + "'");
}

// next line must read "<name> =[ <value>]"; returns the value part
std::string value(std::istream& is, const char* name) {
    std::string line;
    if (!std::getline(is, line))
        throw InputError(std::string("run.cfg: missing '") + name + "' line");
    std::string pre = std::string(name) + " =";
    if (line.rfind(pre, 0) != 0)
        throw InputError("run.cfg: expected '" + pre + "', got '" + line + "'");
    std::string v = line.substr(pre.size());
    if (!v.empty() && v[0] == ' ') v.erase(0, 1);
    return v;
}

void check_fail(const std::string& what) { throw InputError("check failed: " + what); }

} // namespace

// ---- run.cfg ---------------------------------------------------------------

void runcfg_write(std::ostream& os, const RunConfig& c) {
    os << "RUNCFG command=" << c.command << "\n";
    os << "n = " << c.n << "\n";
    os << "k = " << c.k << "\n";
    os << "s = " << c.s << "\n";
    os << "gamma = " << g17(c.gamma) << "\n";
    os << "delta = " << g17(c.delta) << "\n";
    os << "ell = " << c.ell << "\n";
    os << "gen = " << c.gen << "\n";
    os << "budget = " << c.budget << "\n";
    os << "vectors = " << c.vectors << "\n";
    os << "rng = " << c.rng << "\n";
    os << "dist = " << c.dist << "\n";
    os << "advwidth = " << c.advwidth << "\n";
    os << "gammas =";
    for (double g : c.gammas) os << " " << g17(g);
    os << "\n";
    os << "threads = " << c.threads << "\n";
    os << "out = " << c.out << "\n";
}

RunConfig runcfg_read(std::istream& is) {
    RunConfig c;
    std::string line;
    const char* head = "RUNCFG command=";
    if (!std::getline(is, line) || line.rfind(head, 0) != 0)
        throw InputError("run.cfg: missing RUNCFG header");
    c.command = line.substr(std::strlen(head));
    c.n = to_int(value(is, "n"));
    c.k = to_int(value(is, "k"));
    c.s = to_u64(value(is, "s"));
    c.gamma = to_dbl(value(is, "gamma"));
    c.delta = to_dbl(value(is, "delta"));
    c.ell = to_int(value(is, "ell"));
    c.gen = value(is, "gen");
    c.budget = to_u64(value(is, "budget"));
    c.vectors = to_u64(value(is, "vectors"));
    c.rng = to_u64(value(is, "rng"));
    c.dist = value(is, "dist");
    c.advwidth = to_int(value(is, "advwidth"));
    std::istringstream gs(value(is, "gammas"));
    std::string tok;
    while (gs >> tok) c.gammas.push_back(to_dbl(tok));
    c.threads = to_int(value(is, "threads"));
    c.out = value(is, "out");
    return c;
}

// ---- file plumbing ----------------------------------------------------------

std::string read_text(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw InputError("cannot open " + p.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot write " + p.string());
    os << text;
    if (!os) throw InputError("write failed for " + p.string());
}

// ---- shared pipeline pieces --------------------------------------------------

Distribution make_dist(const std::string& spec, const TruthTable& f, int advwidth) {
    if (spec == "uniform") return Distribution::uniform(f.n);
    if (spec == "adversarial") {
        if (advwidth < 1 || advwidth > f.n)
            throw InputError("adversarial baseline width " + std::to_string(advwidth) +
                             " out of range [1, n]");
        return adversarial_distribution(f, majority_subcube_baseline(f, advwidth));
    }
    std::ifstream is(spec, std::ios::binary);
    if (!is) throw InputError("cannot open distribution file " + spec);
    Distribution H = dist_read(is);
    if (H.n != f.n)
        throw InputError("distribution is on " + std::to_string(H.n) + " bits, function on " +
                         std::to_string(f.n));
    return H;
}

TruthTable prefix_core(const TruthTable& f, int k) {
    if (k < 1 || k > f.n) throw InputError("prefix arity out of range");
    TruthTable g(k);
    for (uint64_t c = 0; c < g.size(); ++c) g.set(c, f.at(c << (f.n - k)));
    return g;
}

namespace {
constexpr int kLinearRestarts = 100;
}

GenBundle make_gen(const std::string& kind, int nb, Rng& rng) {
    GenBundle gb;
    gb.kind = kind;
    if (kind == "quad") {
        gb.F = find_irreducible(nb);
        gb.gen = approx_gen_quad(gb.F);
    } else if (kind == "linear") {
        gb.spec = std::make_shared<LinearGenSpec>(linear_gen_build(nb, rng, kLinearRestarts));
        gb.gen = approx_gen_linear(*gb.spec);
    } else {
        throw InputError("unknown generator kind '" + kind + "' (quad | linear)");
    }
    return gb;
}

std::string kwgen_text(const GenBundle& gb, const std::vector<uint64_t>& seed) {
    std::ostringstream os;
    if (gb.kind == "quad") {
        QuadGenSpec q;
        q.ctx = gb.F;
        std::vector<uint64_t> words = seed;
        words.resize((4 * gb.F.k + 63) / 64, 0); // zero seed when none was chosen
        q.seed = quad_seed_unpack(gb.F, words.data());
        kwgen_write(os, q);
    } else {
        kwgen_write(os, *gb.spec);
    }
    return os.str();
}

// ---- report parsing -----------------------------------------------------------

ReportFile report_parse(const std::string& text) {
    ReportFile r;
    std::istringstream is(text);
    std::string line;
    std::map<std::string, int> seen;
    while (std::getline(is, line)) {
        auto p = line.find(" = ");
        if (p == std::string::npos)
            throw InputError("report: malformed line '" + line + "'");
        std::string key = line.substr(0, p);
        std::string val = line.substr(p + 3);
        ++seen[key];
        if (key == "gamma") {
            r.gamma = to_dbl(val);
        } else if (key == "ell") {
            r.ell = to_int(val);
        } else if (key == "clamped") {
            r.clamped = to_int(val) != 0;
        } else if (key == "chosenSeed") {
            std::istringstream ws(val);
            std::string w;
            while (ws >> w) r.chosenSeed.push_back(to_hex64(w));
        } else if (key == "seedsTried") {
            r.seedsTried = to_u64(val);
        } else if (key == "goodFraction") {
            r.goodFraction = to_dbl(val);
        } else if (key == "achievedAgreement") {
            r.achievedAgreement = to_dbl(val);
        } else if (key == "size") {
            r.size = to_u64(val);
        } else if (key.rfind("size.", 0) == 0) {
            r.terms[key.substr(5)] = to_dbl(val);
        } else {
            throw InputError("report: unknown key '" + key + "'");
        }
    }
    for (const char* k : {"gamma", "ell", "chosenSeed", "achievedAgreement", "size"})
        if (!seen[k]) throw InputError(std::string("report: missing field ") + k);
    return r;
}

// ---- --check re-verifiers --------------------------------------------------------

void check_gen_hard(const RunConfig& cfg, const fs::path& out) {
    std::ifstream tf(out / "hard.tt", std::ios::binary);
    if (!tf) throw InputError("cannot open " + (out / "hard.tt").string());
    TruthTable f = tt_read(tf);
    std::ifstream cf(out / "hard.cert", std::ios::binary);
    if (!cf) throw InputError("cannot open " + (out / "hard.cert").string());
    Certificate cd = cert_read(cf);

    if (f.n != cfg.n) check_fail("hard.tt arity differs from run.cfg");
    if (cd.n != cfg.n || cd.s != cfg.s || cd.delta != cfg.delta)
        check_fail("hard.cert header disagrees with run.cfg");
    if (cfg.k != 0 && cd.k != cfg.k)
        check_fail("certificate arity differs from the requested --k");

    Certificate rc = existence_certificate(cd.n, cd.k, cd.s, cd.delta);
    if (rc.circuitCountBound != cd.circuitCountBound || rc.countLog2 != cd.countLog2 ||
        rc.tail.log2p != cd.tail.log2p || rc.tail.exact != cd.tail.exact ||
        rc.productLog2 != cd.productLog2 || rc.valid != cd.valid)
        check_fail("hard.cert does not match a recomputed certificate");
    std::printf("CHECK hard.cert: OK (recomputed certificate matches field by field)\n");

    // the sampled function must genuinely be a junta of the certified arity
    int sh = cd.n - cd.k;
    for (uint64_t c = 0; c < (uint64_t{1} << cd.k); ++c) {
        int v = f.at(c << sh);
        for (uint64_t y = 1; y < (uint64_t{1} << sh); ++y)
            if (f.at((c << sh) | y) != v)
                check_fail("hard.tt is not a prefix junta of the certified arity");
    }
    std::printf("CHECK hard.tt: OK (function is a %d-junta on the prefix)\n", cd.k);
}

namespace {

struct ApproxCheck {
    TruthTable f;
    Distribution H;
    ReportFile rep;
    Circuit circ;
};

// netlist-level claims shared by approximate and demo-tightness: the netlist
// validates, its gate count and term sum match the report, and the agreement
// recomputed from its truth table equals the reported value and clears the
// 1/2 + gamma target
ApproxCheck check_approx_core(const RunConfig& cfg, const fs::path& out, const char* ttname) {
    ApproxCheck a;
    std::ifstream tf(out / ttname, std::ios::binary);
    if (!tf) throw InputError("cannot open " + (out / ttname).string());
    a.f = tt_read(tf);
    a.rep = report_parse(read_text(out / "approx.report"));
    a.circ = netlist_from_string(read_text(out / "approx.netlist"));
    validate(a.circ);

    if (a.circ.n != a.f.n) check_fail("netlist arity differs from the function");
    if (a.circ.size() != a.rep.size) check_fail("netlist gate count differs from the reported size");
    double tsum = 0.0;
    for (const auto& [name, v] : a.rep.terms) tsum += v;
    if (tsum != double(a.rep.size)) check_fail("report size terms do not add up to the measured size");
    std::printf("CHECK approx.netlist: OK (validates, %llu gates as reported)\n",
                (unsigned long long)a.rep.size);

    if (a.rep.gamma != cfg.gamma) check_fail("report gamma differs from run.cfg");
    a.H = make_dist(cfg.dist, a.f, cfg.advwidth);
    double ach = agreement(a.f, truth_table(a.circ), a.H);
    if (ach != a.rep.achievedAgreement) check_fail("recomputed agreement differs from the report");
    if (!(ach >= 0.5 + a.rep.gamma)) check_fail("reported agreement misses the 1/2 + gamma target");
    std::printf("CHECK approx.report: OK (agreement %s recomputed from the netlist, target %s met)\n",
                g17(ach).c_str(), g17(0.5 + a.rep.gamma).c_str());
    return a;
}

// the generator file must reproduce the reported goodFraction at the chosen
// seed over the core the scan actually ran on
void check_goodfraction(const fs::path& out, const TruthTable& fc, const Distribution& Hc,
                        const ReportFile& rep) {
    std::ifstream ks(out / "gen.kwgen", std::ios::binary);
    if (!ks) throw InputError("cannot open " + (out / "gen.kwgen").string());
    KwGenFile kg = kwgen_read(ks);
    GenView view = kg.is_quad ? quad_gen_view(kg.quad.ctx) : linear_gen_view(kg.linear);
    if (view.length != fc.size()) check_fail("generator length differs from the scanned arity");
    if (kg.is_quad && quad_seed_pack(kg.quad.ctx, kg.quad.seed) != rep.chosenSeed)
        check_fail("gen.kwgen seed echo differs from the report");
    SubcubeStats st = subcube_stats(fc, Hc, rep.ell, view, rep.chosenSeed);
    if (st.goodFraction != rep.goodFraction)
        check_fail("recomputed goodFraction differs from the report");
    std::printf("CHECK gen.kwgen: OK (goodFraction %s recomputed at the chosen seed)\n",
                g17(st.goodFraction).c_str());
}

} // namespace

void check_approximate(const RunConfig& cfg, const fs::path& out) {
    ApproxCheck a = check_approx_core(cfg, out, "f.tt");
    int expect_ell = cfg.ell >= 0 ? cfg.ell : approx_params(cfg.gamma, a.f.n).ell;
    if (a.rep.ell != expect_ell) check_fail("report ell differs from the configured derivation");
    check_goodfraction(out, a.f, a.H, a.rep);
}

void check_demo_tightness(const RunConfig& cfg, const fs::path& out) {
    check_gen_hard(cfg, out);
    ApproxCheck a = check_approx_core(cfg, out, "hard.tt");

    std::ifstream cf(out / "hard.cert", std::ios::binary);
    Certificate cd = cert_read(cf);
    // the scan ran on the junta core under the prefix marginal of H
    if (a.rep.ell != approx_params(cfg.gamma, cd.k).ell)
        check_fail("report ell differs from the derivation at the core arity");
    TruthTable core = prefix_core(a.f, cd.k);
    Distribution Hm = marginal_prefix(a.H, cd.k);
    check_goodfraction(out, core, Hm, a.rep);
}

void check_rerun(const Artifacts& fresh, const fs::path& out) {
    for (const auto& [name, text] : fresh.files) {
        if (read_text(out / name) != text)
            check_fail(name + " differs from a deterministic re-derivation");
        std::printf("CHECK %s: OK (byte-identical re-derivation)\n", name.c_str());
    }
}

} // namespace harness
