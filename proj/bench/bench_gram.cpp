#include "kzu/suite.hpp"

#include <benchmark/benchmark.h>

using namespace kzu;

namespace {

struct Fixture {
    Instance inst{"A1", parse_weight_list("w,w,w,w", 1), 2, {0, 1, 3, 7}};
    ProposalPlan plan = make_proposal_plan(inst.block_form(), inst.master(), inst.points(), 1);
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

void gram(benchmark::State& state, bool parallel) {
    auto& f = fixture();
    MonteCarloOptions opt;
    opt.samples = state.range(0);
    opt.parallel = parallel;
    for (auto _ : state) {
        auto g = gram_metric(f.inst.block_form(), f.inst.master(), f.plan, f.inst.complex_points(), opt);
        benchmark::DoNotOptimize(g.G);
    }
    state.SetItemsProcessed(state.iterations() * opt.samples);
}

void BM_GramSerial(benchmark::State& state) { gram(state, false); }
void BM_GramParallel(benchmark::State& state) { gram(state, true); }

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(20000)->Arg(80000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(20000)->Arg(80000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
