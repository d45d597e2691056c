// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <vector>

#include "adi/baseline.hpp"
#include "adi/interrogation.hpp"
#include "adi/simulation.hpp"
#include "adi/structure.hpp"

using namespace adi;

namespace {
Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_FrfSweep(benchmark::State& state) {
    const StructureModel m = make_uniform_chain();
    std::vector<double> freqs(16385);
    for (std::size_t k = 0; k < freqs.size(); ++k) freqs[k] = 0.25 * static_cast<double>(k);
    for (auto _ : state) benchmark::DoNotOptimize(frf_sweep(m, m.node_of(2), freqs, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(freqs.size()));
    label(state);
}

void BM_Cycle(benchmark::State& state) {
    const StructureModel m = make_uniform_chain();
    const CycleSimulator sim(m, ExcitationConfig{}, mode(state));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sim.cycle({}, 0.05, seed++, {}, mode(state)));
    label(state);
}

struct Fixture {
    std::vector<SignatureSet> sets;
    Baseline baseline;
    SignatureSet probe;

    Fixture() {
        const CycleSimulator sim(make_uniform_chain(), ExcitationConfig{});
        for (std::uint64_t c = 0; c < 13; ++c) sets.push_back(sim.cycle({}, 0.05, c + 1));
        baseline = accumulate_baseline(sets);
        probe = sim.cycle({}, 0.05, 100);
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void BM_AccumulateBaseline(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(accumulate_baseline(f.sets, {}, "b", mode(state)));
    label(state);
}

void BM_Interrogate(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(interrogate(f.baseline, f.probe, {}, mode(state)));
    label(state);
}
}  // namespace

BENCHMARK(BM_FrfSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cycle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AccumulateBaseline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Interrogate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
