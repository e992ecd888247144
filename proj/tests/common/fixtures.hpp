#ifndef BROWNSIM_TESTS_FIXTURES_HPP
#define BROWNSIM_TESTS_FIXTURES_HPP

#include <vector>

#include "brownsim/config.hpp"
#include "brownsim/domain.hpp"

namespace brownsim::testing {

// The worked application example: 8 components, 4 optional carrying 50%
// utilization and 50% discount, with two connected pairs (4<->7, 5<->6).
inline ApplicationSpec example_app() {
    ApplicationSpec app;
    app.components = {
        {0, ComponentKind::Mandatory, 0.10, 0.10, std::nullopt},
        {1, ComponentKind::Mandatory, 0.10, 0.10, std::nullopt},
        {2, ComponentKind::Mandatory, 0.20, 0.20, std::nullopt},
        {3, ComponentKind::Mandatory, 0.10, 0.10, std::nullopt},
        {4, ComponentKind::Optional, 0.05, 0.05, 0},
        {5, ComponentKind::Optional, 0.10, 0.10, 1},
        {6, ComponentKind::Optional, 0.15, 0.20, 1},
        {7, ComponentKind::Optional, 0.20, 0.15, 0},
    };
    return app;
}

// Single-component application: effective utilization equals the trace.
inline ApplicationSpec opaque_app() {
    ApplicationSpec app;
    app.components = {{0, ComponentKind::Mandatory, 1.0, 0.0, std::nullopt}};
    return app;
}

inline VmInstance make_vm(int id, double mips, std::vector<double> demand, ApplicationSpec app) {
    VmInstance vm;
    vm.id = id;
    vm.mips = mips;
    vm.app = std::move(app);
    vm.active.assign(vm.app.components.size(), true);
    vm.demand = std::move(demand);
    return vm;
}

inline HostInstance make_host(int id, double capacity_mips, const PowerTable& table) {
    HostInstance host;
    host.id = id;
    host.capacity_mips = capacity_mips;
    host.power = table;
    return host;
}

// Desk-scale reference scenario: 20 hosts, 40 VMs, one simulated day of
// slow-drift random-walk demand heavy enough to keep parts of the fleet
// above the overload power threshold.
inline RunConfig desk_config(std::uint64_t seed) {
    RunConfig cfg;
    cfg.hosts_per_type = {10, 10};
    cfg.vms_per_type = {10, 10, 10, 10};
    cfg.horizon_intervals = 288;
    cfg.seed = seed;
    cfg.trace.kind = TraceSource::Kind::RandomWalk;
    cfg.trace.walk_start = 0.8;
    cfg.trace.walk_step = 0.01;
    cfg.trace.walk_min = 0.6;
    cfg.trace.walk_max = 1.0;
    return cfg;
}

}  // namespace brownsim::testing

#endif
