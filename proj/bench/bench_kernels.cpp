// Microbenchmarks pitting the OpenMP kernels against the serial reference
// path (agreement_serial) and showing how the remaining parallel kernels
// scale. Each parallel kernel is registered at thread counts 1 and
// omp_get_max_threads(), so on a multi-core host the speedup is visible in
// one run; on a single core the pairs should coincide.

#include <omp.h>

#include <benchmark/benchmark.h>

#include "hc/approx.hpp"
#include "hc/circuit.hpp"
#include "hc/corefn.hpp"
#include "hc/distribution.hpp"
#include "hc/gf2k.hpp"
#include "hc/kwise.hpp"
#include "hc/rng.hpp"
#include "hc/truth_table.hpp"

using namespace hc;

namespace {

// shared inputs, built once; sized so one iteration is a few milliseconds
struct Inputs {
    TruthTable f20, g20, f18, h14;
    Distribution H20, H18;
    ApproxGen gen18;
    Circuit junta18;

    Inputs()
        : f20(TruthTable::constant(20, 0)),
          g20(TruthTable::constant(20, 0)),
          f18(TruthTable::constant(18, 0)),
          h14(TruthTable::constant(14, 0)),
          H20(Distribution::uniform(20)),
          H18(Distribution::uniform(18)),
          gen18(approx_gen_quad(find_irreducible(18))) {
        Rng rng(11);
        f20 = TruthTable::random(20, rng);
        g20 = TruthTable::random(20, rng);
        f18 = TruthTable::random(18, rng);
        h14 = TruthTable::random(14, rng);
        junta18 = lift_prefix(build_junta_table(h14), 18);
    }
};

const Inputs& inputs() {
    static Inputs in;
    return in;
}

void bm_agreement_serial(benchmark::State& st) {
    const Inputs& in = inputs();
    for (auto _ : st)
        benchmark::DoNotOptimize(agreement_serial(in.f20, in.g20, in.H20));
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << 20));
}

void bm_agreement_omp(benchmark::State& st) {
    omp_set_num_threads(int(st.range(0)));
    const Inputs& in = inputs();
    for (auto _ : st)
        benchmark::DoNotOptimize(agreement(in.f20, in.g20, in.H20));
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << 20));
}

// generator scan scoring: one seed's block sums over all of {0,1}^18
void bm_subcube_stats(benchmark::State& st) {
    omp_set_num_threads(int(st.range(0)));
    const Inputs& in = inputs();
    std::vector<uint64_t> seed{0x9e3779b97f4a7c15ull, 0x2545f4914f6cdd1dull};
    for (auto _ : st)
        benchmark::DoNotOptimize(
            subcube_stats(in.f18, in.H18, 2, in.gen18.view, seed));
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << 18));
}

// netlist evaluation over the full cube (the agreement audit's main cost)
void bm_truth_table(benchmark::State& st) {
    omp_set_num_threads(int(st.range(0)));
    const Inputs& in = inputs();
    for (auto _ : st)
        benchmark::DoNotOptimize(truth_table(in.junta18));
    st.SetItemsProcessed(st.iterations() *
                         int64_t(in.junta18.gates.size() * (uint64_t{1} << 18)));
}

// candidate scoring loop of the seed selector (parallel over candidates)
void bm_seed_scan(benchmark::State& st) {
    omp_set_num_threads(int(st.range(0)));
    const Inputs& in = inputs();
    for (auto _ : st) {
        Rng rng(17);
        benchmark::DoNotOptimize(
            select_seed(in.f18, in.H18, 2, in.gen18.view, 16, rng));
    }
    st.SetItemsProcessed(st.iterations() * 16 * (int64_t{1} << 18));
}

// exhaustive 2^16-seed anticoncentration sweep over GF(2^4)
void bm_anticoncentration(benchmark::State& st) {
    omp_set_num_threads(int(st.range(0)));
    static const GenView view = quad_gen_view(find_irreducible(4));
    Rng rng(4);
    std::vector<double> v(view.length);
    for (double& x : v)
        x = 2.0 * rng.unit() - 1.0;
    for (auto _ : st)
        benchmark::DoNotOptimize(anticoncentration_check(view, v));
    st.SetItemsProcessed(st.iterations() * 65536);
}

void register_threaded(const char* name, void (*fn)(benchmark::State&)) {
    benchmark::RegisterBenchmark(name, fn)->Arg(1)->Unit(benchmark::kMillisecond);
    int hw = omp_get_max_threads();
    if (hw > 1)
        benchmark::RegisterBenchmark(name, fn)->Arg(hw)->Unit(
            benchmark::kMillisecond);
}

} // namespace

int main(int argc, char** argv) {
    benchmark::RegisterBenchmark("agreement_serial", bm_agreement_serial)
        ->Unit(benchmark::kMillisecond);
    register_threaded("agreement_omp", bm_agreement_omp);
    register_threaded("subcube_stats", bm_subcube_stats);
    register_threaded("truth_table", bm_truth_table);
    register_threaded("seed_scan", bm_seed_scan);
    register_threaded("anticoncentration", bm_anticoncentration);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv))
        return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
