#include <benchmark/benchmark.h>

#include "brownsim/simulator.hpp"

namespace {

brownsim::RunConfig bench_config(int hosts_per_type, int vms_per_type, int horizon) {
    brownsim::RunConfig cfg;
    cfg.hosts_per_type = {hosts_per_type, hosts_per_type};
    cfg.vms_per_type = {vms_per_type, vms_per_type, vms_per_type, vms_per_type};
    cfg.horizon_intervals = horizon;
    cfg.trace.kind = brownsim::TraceSource::Kind::RandomWalk;
    cfg.trace.walk_start = 0.75;
    cfg.trace.walk_step = 0.05;
    cfg.trace.walk_min = 0.4;
    cfg.trace.walk_max = 1.0;
    return cfg;
}

void BM_RunDeskDay(benchmark::State& state) {
    const auto cfg = bench_config(10, 10, 288);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brownsim::run(cfg));
    }
}
BENCHMARK(BM_RunDeskDay)->Unit(benchmark::kMillisecond);

void BM_RunHundredHosts(benchmark::State& state) {
    const auto cfg = bench_config(50, 50, 48);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brownsim::run(cfg));
    }
}
BENCHMARK(BM_RunHundredHosts)->Unit(benchmark::kMillisecond);

}  // namespace
