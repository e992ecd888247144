#include <benchmark/benchmark.h>

#include "brownsim/power.hpp"

namespace {

void BM_PowerAt(benchmark::State& state) {
    const auto& table = brownsim::builtin_power_table("ibm_x3550m3_x5670");
    double u = 0.0;
    for (auto _ : state) {
        u += 0.001;
        if (u > 1.0) u = 0.0;
        benchmark::DoNotOptimize(brownsim::power_at(table, u));
    }
}
BENCHMARK(BM_PowerAt);

void BM_UtilizationForPower(benchmark::State& state) {
    const auto& table = brownsim::builtin_power_table("ibm_x3550m3_x5670");
    double p = table.min_watts();
    for (auto _ : state) {
        p += 0.37;
        if (p > table.max_watts()) p = table.min_watts();
        benchmark::DoNotOptimize(brownsim::utilization_for_power(table, p));
    }
}
BENCHMARK(BM_UtilizationForPower);

}  // namespace
