// hc — command-line front end for the hardcore-approximation toolkit.
//
// Subcommands:
//   gen-hard          sample a junta with a counting certificate of hardness
//   approximate       build a subcube approximator for a random function
//   demo-tightness    both halves at once: certified-hard f, then a small
//                     circuit agreeing with it on 1/2 + gamma of inputs
//   verify-kwise      4-wise uniformity test for a generator family
//   anticoncentration signed-sum spread test (the 2/11 bound)
//   enumerate         exact minimum circuit sizes for every small table
//   size-sweep        approximator gate counts across a gamma grid
//
// Exit codes: 0 ok, 2 bad input, 3 target missed, 4 scale guard.
// Every run is deterministic in (flags, --rng); --threads only changes wall
// time. With --out DIR the artifacts land in DIR and `--check --out DIR`
// later re-verifies them from the files alone.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "harness.hpp"
#include "hc/circuit.hpp"
#include "hc/corefn.hpp"
#include "hc/error.hpp"
#include "hc/hardness.hpp"

using namespace hc;
using harness::Artifacts;
using harness::g17;
using harness::GenBundle;
using harness::RunConfig;

namespace fs = std::filesystem;

namespace {

void emit_runcfg(Artifacts& a, const RunConfig& cfg) {
    std::ostringstream os;
    harness::runcfg_write(os, cfg);
    a.files.emplace_back("run.cfg", os.str());
}

// ---- gen-hard ---------------------------------------------------------------

Artifacts run_gen_hard(RunConfig& cfg) {
    if (cfg.n < 1) throw InputError("gen-hard needs --n");
    Rng rng(cfg.rng);
    HardSample hs = sample_hard_junta(cfg.n, cfg.s, cfg.delta, rng, cfg.k);

    Artifacts a;
    {
        std::ostringstream os;
        tt_write(os, hs.f);
        a.files.emplace_back("hard.tt", os.str());
    }
    {
        std::ostringstream os;
        cert_write(os, hs.cert);
        a.files.emplace_back("hard.cert", os.str());
    }
    emit_runcfg(a, cfg);

    std::ostringstream so;
    so << "gen-hard: n=" << cfg.n << " k=" << hs.cert.k << " s=" << cfg.s
       << " delta=" << g17(cfg.delta) << "\n";
    so << "certificate: valid=" << (hs.cert.valid ? 1 : 0)
       << " product.log2=" << g17(hs.cert.productLog2) << "\n";
    if (hs.cert.valid) {
        so << "gen-hard: OK (no size-" << cfg.s << " circuit agrees on a "
           << g17(1.0 - cfg.delta) << " fraction of inputs)\n";
    } else {
        so << "gen-hard: FAIL (certificate product is not below 1; no guarantee at this arity)\n";
        a.status = 3;
    }
    a.stdout_text = so.str();
    return a;
}

// ---- approximate / demo-tightness ---------------------------------------------

// fixed-depth variant of the end-to-end builder: one scan at the given ell,
// no retry ladder, same report shape
ApproxReport approximate_at_ell(const TruthTable& f, const Distribution& H, double gamma,
                                const ApproxGen& gen, int ell, uint64_t budget, Rng& rng) {
    require_guarantee_range(gamma, f.n);
    SeedChoice sc = select_seed(f, H, ell, gen.view, budget, rng);
    Circuit junta = build_junta_table(build_h(sc.stats));
    Circuit genc = gen.realize(sc.seed);
    Circuit circ = xor_compose(lift_prefix(junta, f.n), genc);
    double achieved = agreement(f, truth_table(circ), H);

    ApproxReport rep;
    rep.gamma = gamma;
    rep.ell = ell;
    rep.clamped = false;
    rep.chosenSeed = sc.seed;
    rep.seedsTried = sc.seedsTried;
    rep.goodFraction = sc.stats.goodFraction;
    rep.achievedAgreement = achieved;
    rep.sizes.measured = circ.size();
    rep.sizes.terms = {
        {"junta_gates", double(junta.size())},
        {"generator_gates", double(genc.size())},
        {"xor_gates", 1.0},
    };
    rep.circuit = std::move(circ);
    if (achieved < 0.5 + gamma)
        throw TargetMissed("fixed-depth scan reached agreement " + g17(achieved) +
                           ", target " + g17(0.5 + gamma));
    return rep;
}

void emit_approx(Artifacts& a, const GenBundle& gb, const ApproxReport& rep) {
    a.files.emplace_back("gen.kwgen", harness::kwgen_text(gb, rep.chosenSeed));
    a.files.emplace_back("approx.netlist", netlist_to_string(rep.circuit));
    std::ostringstream os;
    approx_report_write(os, rep);
    a.files.emplace_back("approx.report", os.str());
}

std::string report_block(const ApproxReport& rep, double gamma) {
    std::ostringstream so;
    approx_report_write(so, rep);
    so << "target = " << g17(0.5 + gamma) << "\n";
    return so.str();
}

Artifacts run_approximate(RunConfig& cfg) {
    if (cfg.n < 1) throw InputError("approximate needs --n");
    if (cfg.budget == 0) throw InputError("approximate needs --budget >= 1");
    Rng rng(cfg.rng);
    TruthTable f = TruthTable::random(cfg.n, rng);
    GenBundle gb = harness::make_gen(cfg.gen, cfg.n, rng);
    if (cfg.dist == "adversarial") cfg.advwidth = cfg.k > 0 ? cfg.k : cfg.n / 2;
    Distribution H = harness::make_dist(cfg.dist, f, cfg.advwidth);

    ApproxReport rep = cfg.ell >= 0
                           ? approximate_at_ell(f, H, cfg.gamma, gb.gen, cfg.ell, cfg.budget, rng)
                           : build_approximator(f, H, cfg.gamma, gb.gen, cfg.budget, rng);

    Artifacts a;
    {
        std::ostringstream os;
        tt_write(os, f);
        a.files.emplace_back("f.tt", os.str());
    }
    emit_approx(a, gb, rep);
    emit_runcfg(a, cfg);

    std::ostringstream so;
    so << report_block(rep, cfg.gamma);
    so << "approximate: OK (" << rep.sizes.measured << " gates reach the target)\n";
    a.stdout_text = so.str();
    return a;
}

Artifacts run_demo_tightness(RunConfig& cfg) {
    if (cfg.budget == 0) throw InputError("demo-tightness needs --budget >= 1");
    Rng rng(cfg.rng);
    HardSample hs = sample_hard_junta(cfg.n, cfg.s, cfg.delta, rng, cfg.k);
    int kc = hs.cert.k;
    GenBundle gb = harness::make_gen(cfg.gen, kc, rng);
    if (cfg.dist == "adversarial") cfg.advwidth = cfg.n / 2;
    Distribution H = harness::make_dist(cfg.dist, hs.f, cfg.advwidth);

    // approximate the junta core under the prefix marginal, then lift; the
    // junta structure makes the full-space agreement equal the core one
    TruthTable core = harness::prefix_core(hs.f, kc);
    Distribution Hm = marginal_prefix(H, kc);
    ApproxReport rep = build_approximator(core, Hm, cfg.gamma, gb.gen, cfg.budget, rng);

    Circuit lifted = lift_prefix(rep.circuit, cfg.n);
    double achieved = agreement(hs.f, truth_table(lifted), H);
    rep.circuit = std::move(lifted);
    rep.sizes.measured = rep.circuit.size();
    rep.achievedAgreement = achieved; // recomputed on the full space
    if (achieved < 0.5 + cfg.gamma)
        throw TargetMissed("lifted approximator reached agreement " + g17(achieved) +
                           ", target " + g17(0.5 + cfg.gamma));

    Artifacts a;
    {
        std::ostringstream os;
        tt_write(os, hs.f);
        a.files.emplace_back("hard.tt", os.str());
    }
    {
        std::ostringstream os;
        cert_write(os, hs.cert);
        a.files.emplace_back("hard.cert", os.str());
    }
    emit_approx(a, gb, rep);
    emit_runcfg(a, cfg);

    std::ostringstream so;
    so << "hardness: k=" << kc << " valid=" << (hs.cert.valid ? 1 : 0)
       << " product.log2=" << g17(hs.cert.productLog2) << "\n";
    so << report_block(rep, cfg.gamma);
    if (hs.cert.valid) {
        so << "demo-tightness: PASS (no size-" << cfg.s << " circuit reaches "
           << g17(1.0 - cfg.delta) << " agreement, yet " << rep.sizes.measured
           << " gates reach " << g17(achieved) << ")\n";
    } else {
        so << "demo-tightness: FAIL (approximation target met but the hardness "
              "certificate is invalid at this arity)\n";
        a.status = 3;
    }
    a.stdout_text = so.str();
    return a;
}

// ---- verify-kwise / anticoncentration -------------------------------------------

// quad families live on --k field bits, linear ones on --n message bits
int gen_arity(const RunConfig& cfg) {
    int nb = cfg.gen == "quad" ? cfg.k : cfg.n;
    if (nb <= 0)
        throw InputError(cfg.gen == "quad" ? "--gen quad needs --k" : "--gen linear needs --n");
    return nb;
}

Artifacts run_verify_kwise(RunConfig& cfg) {
    Rng rng(cfg.rng);
    int nb = gen_arity(cfg);
    GenBundle gb = harness::make_gen(cfg.gen, nb, rng);
    KwiseReport rep = verify_kwise(gb.gen.view, 4, {}, cfg.budget, cfg.budget ? &rng : nullptr);

    std::ostringstream so;
    so << "KWISE gen=" << cfg.gen << (cfg.gen == "quad" ? " k=" : " n=") << nb
       << " order=4 mode=" << (rep.exhaustive ? "exhaustive" : "sampled")
       << " seeds=" << rep.seeds_used << "\n";
    uint64_t uniform = 0;
    for (const KwiseCheck& c : rep.checks) {
        for (size_t i = 0; i < c.positions.size(); ++i) so << (i ? " " : "") << c.positions[i];
        so << " : " << (c.ok ? (rep.exhaustive ? "EXACT UNIFORM" : "WITHIN 5 SIGMA") : "NONUNIFORM")
           << "\n";
        uniform += c.ok ? 1 : 0;
    }
    so << "verify-kwise: " << (rep.ok ? "OK" : "FAIL") << " (" << uniform << "/"
       << rep.checks.size() << " position sets uniform)\n";

    Artifacts a;
    a.files.emplace_back("gen.kwgen", harness::kwgen_text(gb, {}));
    a.files.emplace_back("kwise.report", so.str());
    emit_runcfg(a, cfg);
    a.stdout_text = so.str();
    a.status = rep.ok ? 0 : 3;
    return a;
}

Artifacts run_anticoncentration(RunConfig& cfg) {
    Rng rng(cfg.rng);
    int nb = gen_arity(cfg);
    GenBundle gb = harness::make_gen(cfg.gen, nb, rng);

    std::ostringstream so;
    so << "ANTICONC gen=" << cfg.gen << (cfg.gen == "quad" ? " k=" : " n=") << nb
       << " vectors=" << cfg.vectors << " mode=" << (cfg.budget ? "sampled" : "exhaustive")
       << "\n";
    uint64_t passed = 0;
    for (uint64_t i = 0; i < cfg.vectors; ++i) {
        std::vector<double> v(gb.gen.view.length);
        for (double& x : v) x = 2.0 * rng.unit() - 1.0;
        AnticoncResult res =
            anticoncentration_check(gb.gen.view, v, cfg.budget, cfg.budget ? &rng : nullptr);
        so << "v" << i << " : hits=" << res.hits << " seeds=" << res.seeds
           << " fraction=" << g17(res.fraction()) << " "
           << (res.meets_bound() ? "PASS" : "FAIL") << "\n";
        passed += res.meets_bound() ? 1 : 0;
    }
    so << "anticoncentration: " << (passed == cfg.vectors ? "PASS" : "FAIL") << " (" << passed
       << "/" << cfg.vectors << " vectors meet the 2/11 bound)\n";

    Artifacts a;
    a.files.emplace_back("gen.kwgen", harness::kwgen_text(gb, {}));
    a.files.emplace_back("anticonc.report", so.str());
    emit_runcfg(a, cfg);
    a.stdout_text = so.str();
    a.status = passed == cfg.vectors ? 0 : 3;
    return a;
}

// ---- enumerate -------------------------------------------------------------------

Artifacts run_enumerate(RunConfig& cfg) {
    if (cfg.n < 1) throw InputError("enumerate needs --n");
    MinSizeTable t = min_size_table(cfg.n, int(cfg.s));

    std::map<int, uint64_t> hist;
    for (const auto& [mask, e] : t.entry) ++hist[e.size];

    std::ostringstream so;
    so << "MINSIZE n=" << cfg.n << " maxGates=" << cfg.s << "\n";
    for (const auto& [size, count] : hist) so << "size " << size << ": " << count << " tables\n";
    so << "total reachable: " << t.entry.size() << " of " << (uint64_t{1} << (1 << cfg.n))
       << " tables\n";

    Artifacts a;
    {
        std::ostringstream os;
        minsize_write(os, t);
        a.files.emplace_back("minsize.txt", os.str());
    }
    emit_runcfg(a, cfg);
    a.stdout_text = so.str();
    return a;
}

// ---- size-sweep --------------------------------------------------------------------

Artifacts run_size_sweep(RunConfig& cfg) {
    if (cfg.n < 1) throw InputError("size-sweep needs --n");
    if (cfg.budget == 0) throw InputError("size-sweep needs --budget >= 1");
    if (cfg.gammas.empty()) cfg.gammas = {0.02, 0.01, 0.005};
    Rng rng(cfg.rng);
    GenBundle gb = harness::make_gen(cfg.gen, cfg.n, rng);
    Distribution U = Distribution::uniform(cfg.n);

    std::ostringstream so;
    so << "SWEEP n=" << cfg.n << " gen=" << cfg.gen << " budget=" << cfg.budget
       << " rng=" << cfg.rng << "\n";
    so << "gamma ell clamped junta_gates generator_gates xor_gates measured reference n^2\n";
    for (double gm : cfg.gammas) {
        // sizes are meaningful below the guarantee range too, so no range
        // check here: the sweep includes cells where ell clamps to 0
        ApproxParams p = approx_params(gm, cfg.n);
        TruthTable f = TruthTable::random(cfg.n, rng);
        SeedChoice sc = select_seed(f, U, p.ell, gb.gen.view, cfg.budget, rng);
        Circuit junta = build_junta_table(build_h(sc.stats));
        Circuit genc = gb.gen.realize(sc.seed);
        Circuit circ = xor_compose(lift_prefix(junta, cfg.n), genc);
        double g2n = gm * gm * std::ldexp(1.0, cfg.n);
        so << g17(gm) << " " << p.ell << " " << (p.clamped ? 1 : 0) << " " << junta.size() << " "
           << genc.size() << " 1 " << circ.size() << " " << g17(g2n / std::log2(g2n)) << " "
           << cfg.n * cfg.n << "\n";
    }

    Artifacts a;
    a.files.emplace_back("sweep.txt", so.str());
    emit_runcfg(a, cfg);
    a.stdout_text = so.str();
    return a;
}

// ---- dispatch -----------------------------------------------------------------------

struct Cmd {
    RunConfig* cfg;
    Artifacts (*run)(RunConfig&);
};

int do_check(const RunConfig& cli, const Cmd& cmd) {
    if (cli.out.empty()) throw InputError("--check needs --out");
    fs::path out = cli.out;
    std::ifstream is(out / "run.cfg", std::ios::binary);
    if (!is) throw InputError("cannot open " + (out / "run.cfg").string());
    RunConfig cfg = harness::runcfg_read(is);
    if (cfg.command != cli.command)
        throw InputError("run.cfg records command '" + cfg.command + "', not '" + cli.command +
                         "'");
    if (cfg.command == "gen-hard") {
        harness::check_gen_hard(cfg, out);
    } else if (cfg.command == "approximate") {
        harness::check_approximate(cfg, out);
    } else if (cfg.command == "demo-tightness") {
        harness::check_demo_tightness(cfg, out);
    } else {
        // report-style artifacts: re-derive everything and demand byte identity
        Artifacts fresh = cmd.run(cfg);
        harness::check_rerun(fresh, out);
    }
    std::printf("check: OK (%s)\n", out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardcore-approximation toolkit"};
    app.require_subcommand(1);

    RunConfig cGen, cApprox, cDemo, cKwise, cAnti, cEnum, cSweep;
    std::map<std::string, Cmd> cmds;

    auto common = [](CLI::App* s, RunConfig& c) {
        s->add_option("--rng", c.rng, "random seed")->capture_default_str();
        s->add_option("--threads", c.threads, "OpenMP thread count (0 = library default)");
        s->add_option("--out", c.out, "directory for the run's artifacts");
        s->add_flag("--check", c.check, "re-verify a finished --out directory from its files");
    };

    {
        auto* s = app.add_subcommand("gen-hard",
                                     "sample a junta with a counting certificate of hardness");
        s->add_option("--n", cGen.n, "input bits (<= 26)");
        s->add_option("--k", cGen.k, "junta arity (0 = smallest certified)")->capture_default_str();
        s->add_option("--s", cGen.s, "adversary circuit size")->capture_default_str();
        s->add_option("--delta", cGen.delta, "disagreement fraction")->capture_default_str();
        common(s, cGen);
        cmds["gen-hard"] = {&cGen, run_gen_hard};
    }
    {
        auto* s = app.add_subcommand("approximate",
                                     "build a subcube approximator for a random function");
        s->add_option("--n", cApprox.n, "input bits");
        s->add_option("--gamma", cApprox.gamma, "target advantage over 1/2")->capture_default_str();
        s->add_option("--ell", cApprox.ell, "subcube depth override (-1 = derive from gamma)");
        s->add_option("--gen", cApprox.gen, "generator family: quad | linear")
            ->capture_default_str();
        s->add_option("--budget", cApprox.budget, "seed candidates per scan")
            ->capture_default_str();
        s->add_option("--dist", cApprox.dist, "uniform | adversarial | DIST file")
            ->capture_default_str();
        s->add_option("--k", cApprox.k, "adversarial baseline width (0 = n/2)");
        common(s, cApprox);
        cmds["approximate"] = {&cApprox, run_approximate};
    }
    {
        cDemo.n = 22;
        auto* s = app.add_subcommand("demo-tightness",
                                     "certified-hard junta + small approximator, end to end");
        s->add_option("--n", cDemo.n, "input bits")->capture_default_str();
        s->add_option("--k", cDemo.k, "junta arity (0 = smallest certified)")
            ->capture_default_str();
        s->add_option("--s", cDemo.s, "adversary circuit size")->capture_default_str();
        s->add_option("--gamma", cDemo.gamma, "target advantage over 1/2")->capture_default_str();
        s->add_option("--delta", cDemo.delta, "disagreement fraction")->capture_default_str();
        s->add_option("--gen", cDemo.gen, "generator family: quad | linear")
            ->capture_default_str();
        s->add_option("--budget", cDemo.budget, "seed candidates per scan")->capture_default_str();
        s->add_option("--dist", cDemo.dist, "uniform | adversarial | DIST file")
            ->capture_default_str();
        common(s, cDemo);
        cmds["demo-tightness"] = {&cDemo, run_demo_tightness};
    }
    {
        cKwise.budget = 0;
        auto* s = app.add_subcommand("verify-kwise", "4-wise uniformity test for a generator");
        s->add_option("--gen", cKwise.gen, "generator family: quad | linear")
            ->capture_default_str();
        s->add_option("--k", cKwise.k, "field degree for --gen quad");
        s->add_option("--n", cKwise.n, "message bits for --gen linear");
        s->add_option("--budget", cKwise.budget, "sampled seeds (0 = exhaustive)")
            ->capture_default_str();
        common(s, cKwise);
        cmds["verify-kwise"] = {&cKwise, run_verify_kwise};
    }
    {
        cAnti.budget = 0;
        auto* s = app.add_subcommand("anticoncentration",
                                     "signed-sum spread test against the 2/11 bound");
        s->add_option("--gen", cAnti.gen, "generator family: quad | linear")
            ->capture_default_str();
        s->add_option("--k", cAnti.k, "field degree for --gen quad");
        s->add_option("--n", cAnti.n, "message bits for --gen linear");
        s->add_option("--vectors", cAnti.vectors, "random weight vectors to test")
            ->capture_default_str();
        s->add_option("--budget", cAnti.budget, "sampled seeds (0 = exhaustive)")
            ->capture_default_str();
        common(s, cAnti);
        cmds["anticoncentration"] = {&cAnti, run_anticoncentration};
    }
    {
        cEnum.s = 5;
        auto* s = app.add_subcommand("enumerate",
                                     "exact minimum circuit sizes for every reachable table");
        s->add_option("--n", cEnum.n, "input bits (<= 4)");
        s->add_option("--s", cEnum.s, "gate cap (<= 5)")->capture_default_str();
        common(s, cEnum);
        cmds["enumerate"] = {&cEnum, run_enumerate};
    }
    {
        cSweep.budget = 8;
        auto* s = app.add_subcommand("size-sweep",
                                     "approximator gate counts across a gamma grid");
        s->add_option("--n", cSweep.n, "input bits");
        s->add_option("--gamma", cSweep.gammas,
                      "grid values, repeatable (default 0.02 0.01 0.005)");
        s->add_option("--gen", cSweep.gen, "generator family: quad | linear")
            ->capture_default_str();
        s->add_option("--budget", cSweep.budget, "seed candidates per cell")
            ->capture_default_str();
        common(s, cSweep);
        cmds["size-sweep"] = {&cSweep, run_size_sweep};
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Cmd cmd = cmds.at(name);
    RunConfig& cfg = *cmd.cfg;
    cfg.command = name;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    try {
        if (cfg.check) return do_check(cfg, cmd);
        Artifacts a = cmd.run(cfg);
        if (!cfg.out.empty()) {
            fs::create_directories(cfg.out);
            for (const auto& [fname, text] : a.files)
                harness::write_text(fs::path(cfg.out) / fname, text);
        }
        std::fputs(a.stdout_text.c_str(), stdout);
        if (!cfg.out.empty())
            std::printf("wrote %zu artifacts under %s\n", a.files.size(), cfg.out.c_str());
        return a.status;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const TargetMissed& e) {
        std::fprintf(stderr, "target missed: %s\n", e.what());
        return 3;
    } catch (const ScaleGuard& e) {
        std::fprintf(stderr, "scale guard: %s\n", e.what());
        return 4;
    }
}
