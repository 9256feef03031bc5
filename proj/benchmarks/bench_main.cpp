#include <benchmark/benchmark.h>

#include "hmp/annealer.hpp"
#include "hmp/evaluation.hpp"
#include "hmp/exact_oracle.hpp"
#include "hmp/instance_io.hpp"

namespace {

hmp::Instance fleet_instance(int fleet_size, std::uint64_t seed) {
    hmp::GeneratorConfig cfg;
    cfg.fleet_size = fleet_size;
    cfg.seed = seed;
    return hmp::generate(cfg);
}

hmp::Schedule earliest_schedule(const hmp::Instance& inst) {
    hmp::Schedule sched;
    const auto windows = hmp::fleet_windows(inst);
    for (std::size_t i = 0; i < inst.trains.size(); ++i) {
        sched.delivery[inst.trains[i].id] = windows[i].begin_day;
    }
    return sched;
}

void BM_Evaluate(benchmark::State& state) {
    const hmp::Instance inst = fleet_instance(int(state.range(0)), 7);
    const hmp::Schedule sched = earliest_schedule(inst);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hmp::evaluate(inst, sched));
    }
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(40)->Arg(160);

void BM_ComputeWindows(benchmark::State& state) {
    const hmp::Instance inst = fleet_instance(int(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hmp::fleet_windows(inst));
    }
}
BENCHMARK(BM_ComputeWindows)->Arg(10)->Arg(160);

void BM_Anneal(benchmark::State& state) {
    const hmp::Instance inst = fleet_instance(int(state.range(0)), 7);
    hmp::SaParams params;
    params.seed = 11;
    params.max_evaluations = 50'000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hmp::solve(inst, params));
    }
    state.SetItemsProcessed(state.iterations() * 50'000);
}
BENCHMARK(BM_Anneal)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ExactOracle(benchmark::State& state) {
    hmp::GeneratorConfig cfg;
    cfg.fleet_size = 5;
    cfg.seed = 3;
    // Narrow windows keep the enumeration tractable for a benchmark.
    hmp::RegulationTable regs = hmp::default_regulations();
    for (hmp::MaintenanceLevel level : hmp::kAllLevels) {
        regs.rules[level].left_offset_km = 6000.0;
        regs.rules[level].right_offset_km = 6000.0;
    }
    cfg.regulations = regs;
    cfg.daily_acceptance = 3;
    const hmp::Instance inst = hmp::generate(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hmp::solve_exact(inst));
    }
    state.counters["days_per_train"] = double(hmp::variable_count(inst)) / 5.0;
}
BENCHMARK(BM_ExactOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
