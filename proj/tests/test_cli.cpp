#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hc/distribution.hpp"
#include "hc/hardness.hpp"
#include "hc/rng.hpp"

// End-to-end checks of the hc driver: exit codes, artifact emission,
// determinism across reruns, and --check catching tampered files. Heavyweight
// parameter sets live in the acceptance suite; everything here stays at
// sub-second scales.

using namespace hc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(HC_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    int rc = pclose(p);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("hc_cli_" + name);
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << text;
}

// replace the first occurrence of `from` (must exist) and rewrite the file
void tamper(const fs::path& p, const std::string& from, const std::string& to) {
    std::string text = slurp(p);
    size_t at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    spit(p, text);
}

} // namespace

TEST_CASE("exit codes follow the error taxonomy") {
    // gamma below the guaranteed range for n = 12
    CHECK(run_cli("approximate --n 12 --gamma 0.02 --budget 8").status == 2);
    // exhaustive enumeration refuses n = 5
    CHECK(run_cli("enumerate --n 5").status == 4);
    // explicit tiny arity: sampling succeeds but the certificate is invalid
    CHECK(run_cli("gen-hard --n 10 --k 2 --s 6000 --delta 0.3").status == 3);
    // parse errors and missing inputs
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("no-such-command").status == 2);
    CHECK(run_cli("verify-kwise --gen linear").status == 2);
    CHECK(run_cli("verify-kwise --gen what --k 2").status == 2);
    CHECK(run_cli("gen-hard --check").status == 2); // --check needs --out
    CHECK(run_cli("approximate --n 12 --gamma 0.45 --budget 0").status == 2);
}

TEST_CASE("verify-kwise: exact uniformity, determinism, tamper detection") {
    fs::path d1 = fresh_dir("kw1"), d2 = fresh_dir("kw2");
    RunResult r = run_cli("verify-kwise --gen quad --k 2 --out " + d1.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("0 1 2 3 : EXACT UNIFORM") != std::string::npos);
    CHECK(r.out.find("verify-kwise: OK") != std::string::npos);

    CHECK(run_cli("verify-kwise --gen quad --k 2 --out " + d2.string()).status == 0);
    CHECK(slurp(d1 / "kwise.report") == slurp(d2 / "kwise.report"));
    CHECK(slurp(d1 / "gen.kwgen") == slurp(d2 / "gen.kwgen"));

    CHECK(run_cli("verify-kwise --check --out " + d1.string()).status == 0);
    tamper(d1 / "kwise.report", "EXACT UNIFORM", "EXACT UNIFORN");
    CHECK(run_cli("verify-kwise --check --out " + d1.string()).status == 2);
}

TEST_CASE("verify-kwise: sampled linear generator re-verifies") {
    fs::path d = fresh_dir("kwl");
    RunResult r =
        run_cli("verify-kwise --gen linear --n 2 --budget 20000 --rng 9 --out " + d.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("WITHIN 5 SIGMA") != std::string::npos);
    CHECK(run_cli("verify-kwise --check --out " + d.string()).status == 0);
}

TEST_CASE("gen-hard: certificate and junta structure survive --check") {
    fs::path d = fresh_dir("gh");
    RunResult r = run_cli("gen-hard --n 16 --s 16 --delta 0.25 --rng 7 --out " + d.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("certificate: valid=1") != std::string::npos);
    CHECK(slurp(d / "run.cfg").find("RUNCFG command=gen-hard") == 0);
    CHECK(slurp(d / "run.cfg").find("rng = 7\n") != std::string::npos);
    CHECK(run_cli("gen-hard --check --out " + d.string()).status == 0);

    SUBCASE("tampered certificate product") {
        tamper(d / "hard.cert", "product.log2 = -", "product.log2 = -9");
        CHECK(run_cli("gen-hard --check --out " + d.string()).status == 2);
    }
    SUBCASE("tampered table is no longer a junta") {
        // flip one hex digit: some suffix block stops being constant
        std::string tt = slurp(d / "hard.tt");
        size_t pos = tt.find('\n') + 1;
        tt[pos] = tt[pos] == '0' ? '1' : '0';
        spit(d / "hard.tt", tt);
        CHECK(run_cli("gen-hard --check --out " + d.string()).status == 2);
    }
}

TEST_CASE("approximate: clamped exact case emits a full artifact set") {
    fs::path d = fresh_dir("ap");
    RunResult r =
        run_cli("approximate --n 12 --gamma 0.45 --budget 8 --rng 6 --out " + d.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("clamped = 1") != std::string::npos);
    for (const char* f : {"f.tt", "gen.kwgen", "approx.netlist", "approx.report", "run.cfg"})
        CHECK(fs::exists(d / f));
    CHECK(run_cli("approximate --check --out " + d.string()).status == 0);

    SUBCASE("tampered agreement value") {
        tamper(d / "approx.report", "achievedAgreement = ", "achievedAgreement = 0.97");
        CHECK(run_cli("approximate --check --out " + d.string()).status == 2);
    }
    SUBCASE("tampered netlist") {
        tamper(d / "approx.netlist", "= XOR", "= AND");
        CHECK(run_cli("approximate --check --out " + d.string()).status == 2);
    }
}

TEST_CASE("approximate: distribution file input, arity mismatch, target miss") {
    fs::path d = fresh_dir("apd");
    fs::create_directories(d);
    {
        Rng rng(3);
        Distribution H = Distribution::random_smooth(12, 0.5, rng);
        std::ofstream os(d / "h.dist", std::ios::binary);
        dist_write(os, H);
    }
    CHECK(run_cli("approximate --n 12 --gamma 0.45 --budget 8 --dist " + (d / "h.dist").string() +
                  " --out " + (d / "run").string())
              .status == 0);
    CHECK(run_cli("approximate --check --out " + (d / "run").string()).status == 0);
    // 12-bit distribution against a 14-bit function
    CHECK(run_cli("approximate --n 14 --gamma 0.3 --budget 8 --dist " + (d / "h.dist").string())
              .status == 2);
    // a depth-2 override cannot reach the 0.95 target: exit 3, nothing written
    fs::path miss = fresh_dir("apmiss");
    CHECK(run_cli("approximate --n 12 --gamma 0.45 --ell 2 --budget 8 --out " + miss.string())
              .status == 3);
    CHECK(!fs::exists(miss / "approx.report"));
}

TEST_CASE("demo-tightness: valid certificate and exact clamped composition at desk scale") {
    // the guarantee range is checked at the core arity, so desk scale needs
    // an explicit --k wide enough for gamma: (27/2^7, 1/2) at k = 14
    fs::path d1 = fresh_dir("dt1"), d2 = fresh_dir("dt2");
    std::string args = "demo-tightness --n 16 --k 14 --s 16 --delta 0.25 --gamma 0.25 --budget 16";
    RunResult r = run_cli(args + " --out " + d1.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("hardness: k=14 valid=1") != std::string::npos);
    CHECK(r.out.find("demo-tightness: PASS") != std::string::npos);

    CHECK(run_cli(args + " --out " + d2.string()).status == 0);
    for (const char* f : {"hard.tt", "hard.cert", "gen.kwgen", "approx.netlist", "approx.report"})
        CHECK(slurp(d1 / f) == slurp(d2 / f));

    CHECK(run_cli("demo-tightness --check --out " + d1.string()).status == 0);
    // the wrong command refuses the directory
    CHECK(run_cli("gen-hard --check --out " + d1.string()).status == 2);
}

TEST_CASE("enumerate: artifact equals the in-process table") {
    fs::path d = fresh_dir("en");
    RunResult r = run_cli("enumerate --n 2 --out " + d.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("total reachable: 16 of 16 tables") != std::string::npos);
    std::ostringstream os;
    minsize_write(os, min_size_table(2, 5));
    CHECK(slurp(d / "minsize.txt") == os.str());
    CHECK(run_cli("enumerate --check --out " + d.string()).status == 0);
}

TEST_CASE("size-sweep: deterministic rows across the default grid") {
    fs::path d1 = fresh_dir("sw1"), d2 = fresh_dir("sw2");
    RunResult r = run_cli("size-sweep --n 12 --budget 4 --out " + d1.string());
    CHECK(r.status == 0);
    CHECK(run_cli("size-sweep --n 12 --budget 4 --out " + d2.string()).status == 0);
    CHECK(slurp(d1 / "sweep.txt") == slurp(d2 / "sweep.txt"));
    // header + column names + one row per default grid value
    std::string sweep = slurp(d1 / "sweep.txt");
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 5);
    CHECK(run_cli("size-sweep --check --out " + d1.string()).status == 0);
    tamper(d1 / "sweep.txt", "SWEEP n=12", "SWEEP n=13");
    CHECK(run_cli("size-sweep --check --out " + d1.string()).status == 2);
}

TEST_CASE("anticoncentration: exhaustive small field, bound met, re-verifies") {
    fs::path d = fresh_dir("ac");
    RunResult r =
        run_cli("anticoncentration --gen quad --k 3 --vectors 4 --rng 5 --out " + d.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("anticoncentration: PASS (4/4 vectors meet the 2/11 bound)") !=
          std::string::npos);
    CHECK(run_cli("anticoncentration --check --out " + d.string()).status == 0);
}
