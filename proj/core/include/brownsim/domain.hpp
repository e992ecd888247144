#ifndef BROWNSIM_DOMAIN_HPP
#define BROWNSIM_DOMAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "brownsim/power.hpp"

namespace brownsim {

enum class ComponentKind { Mandatory, Optional };

// One application component. utilization and discount are fractions of the
// hosting VM's requested utilization / price; connection_tag groups
// components that must be deactivated together.
struct ComponentSpec {
    int id = 0;
    ComponentKind kind = ComponentKind::Mandatory;
    double utilization = 0.0;
    double discount = 0.0;
    std::optional<int> connection_tag;

    bool is_optional() const { return kind == ComponentKind::Optional; }
};

struct ApplicationSpec {
    std::vector<ComponentSpec> components;

    double optional_utilization_threshold() const;
    double total_discount() const;

    // Throws ConfigError unless fractions are in range and component
    // utilizations sum to 1 within 1e-9.
    void validate() const;
};

struct VmTypeSpec {
    std::string name;
    double mips = 0.0;
};

struct HostTypeSpec {
    std::string name;
    double mips_per_core = 0.0;
    int cores = 1;
    std::string power_table;

    double capacity_mips() const { return mips_per_core * cores; }
};

// The four EC2-style VM classes and two host classes used by default.
const std::vector<VmTypeSpec>& default_vm_types();
const std::vector<HostTypeSpec>& default_host_types();

struct VmInstance {
    int id = 0;
    int type_index = 0;
    double mips = 0.0;
    ApplicationSpec app;
    std::vector<bool> active;   // parallel to app.components
    std::vector<double> demand; // requested utilization per interval
    int host_id = -1;

    // Requested utilization at interval t; throws HorizonError out of range.
    double requested_at(int t) const;

    // Sum of utilization fractions over active components.
    double active_fraction() const;

    // Sum over deactivated components.
    double disabled_fraction() const;

    // requested_at(t) * active_fraction().
    double effective_at(int t) const;

    // Sum of discount fractions over currently deactivated components.
    double vm_discount() const;

    // Deactivates the given component indices; mandatory components are
    // rejected with DomainError.
    void deactivate(const std::vector<int>& component_ids);

    void reactivate_all();
};

enum class HostState { Active, Off };

struct HostInstance {
    int id = 0;
    int type_index = 0;
    double capacity_mips = 0.0;
    PowerTable power;
    std::vector<int> vm_ids;
    HostState state = HostState::Off;

    double max_watts() const { return power.max_watts(); }
};

// How a host in state Off is billed: 0 W (the default) or the table's
// 0% (sleep mode) column.
enum class SleepPower { Zero, Table };

struct DataCenterState {
    std::vector<HostInstance> hosts;
    std::vector<VmInstance> vms;
    int clock = 0;
    double interval_seconds = 300.0;
    SleepPower sleep_power = SleepPower::Zero;

    // Effective VM demand on the host in capacity units, as a fraction of
    // host capacity.
    double host_utilization(int host_id, int t) const;

    // Wattage drawn by the host at interval t (Off hosts per sleep_power).
    double host_power(int host_id, int t) const;

    int active_host_count() const;
    int off_host_count() const;
};

// Invariant probes used by tests and the acceptance suite. Each returns an
// empty string when the invariant holds, else a short description of the
// first violation.
std::string check_placement_totality(const DataCenterState& state);
std::string check_capacity(const DataCenterState& state, int t, double limit = 1.0 + 1e-9);
std::string check_connection_closure(const DataCenterState& state);
std::string check_mandatory_safety(const DataCenterState& state);

}  // namespace brownsim

#endif
