#include <benchmark/benchmark.h>

#include <vector>

#include "brownsim/brownout.hpp"
#include "brownsim/rng.hpp"

namespace {

std::vector<brownsim::SelectableComponent> random_components(int n, bool connected) {
    brownsim::Rng rng(1234);
    std::vector<brownsim::SelectableComponent> comps;
    for (int i = 0; i < n; ++i) {
        brownsim::SelectableComponent c;
        c.id = i;
        c.utilization = brownsim::uniform01(rng) * 0.3;
        c.discount = brownsim::uniform01(rng) * 0.3;
        if (connected && brownsim::uniform01(rng) < 0.5) {
            c.connection_tag = i % 4;
        }
        comps.push_back(c);
    }
    return comps;
}

void BM_SelectLufcs(benchmark::State& state) {
    const auto comps = random_components(static_cast<int>(state.range(0)), false);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brownsim::select_components(brownsim::SelectionPolicy::Lufcs, comps, 0.3));
    }
}
BENCHMARK(BM_SelectLufcs)->Arg(8)->Arg(32)->Arg(128);

void BM_SelectConnected(benchmark::State& state) {
    const auto comps = random_components(static_cast<int>(state.range(0)), true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brownsim::select_components(brownsim::SelectionPolicy::Huprfcs, comps, 0.3));
    }
}
BENCHMARK(BM_SelectConnected)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
