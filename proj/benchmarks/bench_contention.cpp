#include <benchmark/benchmark.h>

#include <vector>

#include "wpan/contention_table.hpp"
#include "wpan/csma_sim.hpp"
#include "wpan/energy_model.hpp"
#include "wpan/link_adapt.hpp"
#include "wpan/params.hpp"

using namespace wpan;

namespace {

// Superframes simulated per second at 100 nodes; range(0) is the load in percent.
void BM_SimulateContention(benchmark::State& state) {
    SimConfig cfg;
    cfg.load = static_cast<double>(state.range(0)) / 100.0;
    cfg.superframes = 1000;
    SimOptions opts;
    opts.workers = 1;
    const MacTiming timing;
    const MacParams mac;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_contention(cfg, timing, mac, opts));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.superframes));
}
BENCHMARK(BM_SimulateContention)->Arg(10)->Arg(40)->Arg(90)->Unit(benchmark::kMillisecond);

void BM_EvaluateLink(benchmark::State& state) {
    const ModelParams params;
    ContentionStats stats;
    stats.t_cont_mean = 4.4e-3;
    stats.n_cca_mean = 2.6;
    stats.pr_col = 0.05;
    stats.pr_caf = 0.15;
    const OperatingPoint point{75.0, -10.0, 120, 6};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_link(params, stats, point));
}
BENCHMARK(BM_EvaluateLink);

// Analytic stage of the case study on a prebuilt table.
void BM_CaseStudy(benchmark::State& state) {
    const ModelParams params;
    const Scenario scenario;
    SimConfig base;
    base.superframes = 200;
    const std::vector<double> loads = {0.2, 0.4, 0.6};
    const std::vector<int> payloads = {100, 120, 123};
    const auto table = build_contention_table(loads, payloads, base, params.timing, params.mac);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_case_study(params, scenario, table));
}
BENCHMARK(BM_CaseStudy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
