#ifndef BROWNSIM_SIMULATOR_HPP
#define BROWNSIM_SIMULATOR_HPP

#include <functional>
#include <iosfwd>

#include "brownsim/config.hpp"
#include "brownsim/metrics.hpp"

namespace brownsim {

// Optional per-interval observer, invoked after consolidation and sampling.
struct RunHooks {
    std::function<void(const DataCenterState&, const IntervalSample&)> after_interval;
};

// Builds the configured fleet: hosts expanded from the per-type counts and
// VMs with generated applications and demand series, all seeded from the
// run seed.
DataCenterState build_fleet(const RunConfig& config, std::ostream* diag = nullptr);

// Replays a migration plan onto the state: VMs reassigned, destinations
// powered on, emptied hosts switched Off. Throws PlanError on duplicate
// VMs, stale sources, non-empty switch-offs, or capacity violations.
void apply_plan(DataCenterState& state, const MigrationPlan& plan);

// Executes one full run: initial placement, then per interval demand
// update, brownout (EEBA only), consolidation, and power sampling.
// Deterministic in (config, seed).
SimulationReport run(const RunConfig& config, std::ostream* diag = nullptr, const RunHooks& hooks = {});

}  // namespace brownsim

#endif
