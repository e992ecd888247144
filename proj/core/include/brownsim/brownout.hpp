#ifndef BROWNSIM_BROWNOUT_HPP
#define BROWNSIM_BROWNOUT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brownsim/domain.hpp"

namespace brownsim {

// How components are ranked for deactivation:
//   Nufcs    - the single component nearest to the target;
//   Lufcs    - lowest utilization first;
//   Lpfcs    - lowest discount first;
//   Huprfcs  - highest utilization/discount ratio first.
enum class SelectionPolicy { Nufcs, Lufcs, Lpfcs, Huprfcs };

SelectionPolicy selection_policy_from_string(const std::string& name);
std::string to_string(SelectionPolicy policy);

struct DimmerState {
    double theta = 0.0;
    int overloaded_count = 0;
};

struct DeactivationRecord {
    int vm_id = -1;
    int host_id = -1;
    int interval = 0;
    std::vector<int> component_ids;
    double utilization_disabled = 0.0;
    double discount_added = 0.0;

    bool empty() const { return component_ids.empty(); }
};

// Candidate for deactivation: a currently active optional component.
struct SelectableComponent {
    int id = 0;
    double utilization = 0.0;
    double discount = 0.0;
    std::optional<int> connection_tag;
};

// Instrumentation for the per-step complexity ceiling.
struct StepStats {
    long hosts_scanned = 0;
    long vms_processed = 0;
    long component_touches = 0;
};

// Number of active hosts whose power strictly exceeds max power x TP.
int count_overloaded_hosts(const DataCenterState& state, double power_threshold);

// sqrt(n_t / M): 0 when nothing is overloaded, 1 when everything is.
double compute_dimmer(int overloaded_count, int total_hosts);

// Utilization the host is expected to shed for a power cut of theta x
// current power; the target power is floored at the table's 0% wattage.
double expected_host_utilization_reduction(const HostInstance& host, double utilization, double theta);

// Fraction of the VM's component budget to deactivate. The host-level
// reduction is a fraction of VM demand and component utilizations are
// fractions of that same demand, so the demand factor cancels and the
// component-sum target equals the host reduction (0 for an idle VM).
double expected_vm_utilization_reduction(const VmInstance& vm, int t, double host_reduction);

// Picks the components to deactivate. Connected components form one unit
// ranked by the average of the policy's key; the chosen prefix of units is
// the one whose utilization sum is nearest the target (ties to the shorter
// prefix), and the result is closed under connection tags.
DeactivationRecord select_components(SelectionPolicy policy, std::span<const SelectableComponent> optional_components,
                                     double target, long* component_touches = nullptr);

// One brownout pass: when any host exceeds the power threshold, derive the
// dimmer from the overload count and deactivate components VM by VM on
// every overloaded host; otherwise reactivate everything everywhere.
// Mutates component states in place and returns the non-empty records.
std::vector<DeactivationRecord> eeba_step(DataCenterState& state, double power_threshold, SelectionPolicy policy,
                                          StepStats* stats = nullptr);

}  // namespace brownsim

#endif
