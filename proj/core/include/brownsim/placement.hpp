#ifndef BROWNSIM_PLACEMENT_HPP
#define BROWNSIM_PLACEMENT_HPP

#include <vector>

#include "brownsim/domain.hpp"
#include "brownsim/rng.hpp"

namespace brownsim {

struct ConsolidationThresholds {
    double upper = 0.8;
    double lower = 0.2;
    double lambda = 1.0;

    void validate() const;
};

struct Move {
    int vm_id = -1;
    int from_host = -1;
    int to_host = -1;

    friend bool operator==(const Move&, const Move&) = default;
};

struct MigrationPlan {
    std::vector<Move> moves;
    std::vector<int> hosts_to_switch_off;
    // Overloaded-host evictions that found no feasible destination; the VMs
    // stay put and the condition is surfaced to the caller.
    std::vector<int> unplaced_vm_ids;

    bool empty() const { return moves.empty() && hosts_to_switch_off.empty(); }
};

// Power-aware best-fit decreasing: VMs in decreasing current utilization,
// each to the powered host with the least power increase, powering on an
// Off host only when no active host fits. Throws PlacementError when a VM
// fits nowhere.
DataCenterState initial_placement(std::vector<VmInstance> vms, std::vector<HostInstance> hosts,
                                  double interval_seconds = 300.0, int t = 0);

// Threshold-driven consolidation: drains hosts above `upper` by evicting
// highest-utilization VMs first, evacuates hosts below `lower` entirely
// when every VM fits elsewhere, and schedules emptied hosts Off.
MigrationPlan pco_consolidate(const DataCenterState& state, const ConsolidationThresholds& thresholds);

// Which form of the migration-probability curve to evaluate. The printed
// form (1 - (u-1)/(1-T_h))^lambda is not a probability for u < 1; the
// corrected form flips the numerator sign. Both clamp to [0, 1].
enum class UbpFormula { Corrected, AsPrinted };

double ubp_migration_probability(double u, const ConsolidationThresholds& thresholds,
                                 UbpFormula formula = UbpFormula::Corrected);

// Like pco_consolidate, but each VM on an overloaded host is selected for
// migration by an independent Bernoulli draw with the host's migration
// probability. Under-utilized handling is identical to PCO.
MigrationPlan ubp_consolidate(const DataCenterState& state, const ConsolidationThresholds& thresholds,
                              UbpFormula formula, Rng& rng);

}  // namespace brownsim

#endif
