#include "brownsim/domain.hpp"

#include <cmath>
#include <map>

#include "brownsim/errors.hpp"

namespace brownsim {

double ApplicationSpec::optional_utilization_threshold() const {
    double sum = 0.0;
    for (const auto& c : components) {
        if (c.is_optional()) {
            sum += c.utilization;
        }
    }
    return sum;
}

double ApplicationSpec::total_discount() const {
    double sum = 0.0;
    for (const auto& c : components) {
        if (c.is_optional()) {
            sum += c.discount;
        }
    }
    return sum;
}

void ApplicationSpec::validate() const {
    if (components.empty()) {
        throw ConfigError("application has no components");
    }
    double util_sum = 0.0;
    for (const auto& c : components) {
        if (!(c.utilization >= 0.0 && c.utilization <= 1.0)) {
            throw ConfigError("component " + std::to_string(c.id) + ": utilization outside [0, 1]");
        }
        if (!(c.discount >= 0.0 && c.discount <= 1.0)) {
            throw ConfigError("component " + std::to_string(c.id) + ": discount outside [0, 1]");
        }
        util_sum += c.utilization;
    }
    if (std::abs(util_sum - 1.0) > 1e-9) {
        throw ConfigError("component utilizations sum to " + std::to_string(util_sum) + ", expected 1");
    }
}

const std::vector<VmTypeSpec>& default_vm_types() {
    static const std::vector<VmTypeSpec> types = {
        {"vm.large", 2500.0},
        {"vm.medium", 2000.0},
        {"vm.small", 1000.0},
        {"vm.micro", 500.0},
    };
    return types;
}

const std::vector<HostTypeSpec>& default_host_types() {
    static const std::vector<HostTypeSpec> types = {
        {"host.g1", 1860.0, 2, "ibm_x3550m3_x5670"},
        {"host.g2", 2660.0, 2, "ibm_x3550m3_x5675"},
    };
    return types;
}

double VmInstance::requested_at(int t) const {
    if (t < 0 || static_cast<std::size_t>(t) >= demand.size()) {
        throw HorizonError("vm " + std::to_string(id) + ": interval " + std::to_string(t) +
                           " outside horizon of " + std::to_string(demand.size()));
    }
    return demand[static_cast<std::size_t>(t)];
}

double VmInstance::active_fraction() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < app.components.size(); ++i) {
        if (active[i]) {
            sum += app.components[i].utilization;
        }
    }
    return sum;
}

double VmInstance::disabled_fraction() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < app.components.size(); ++i) {
        if (!active[i]) {
            sum += app.components[i].utilization;
        }
    }
    return sum;
}

double VmInstance::effective_at(int t) const {
    return requested_at(t) * active_fraction();
}

double VmInstance::vm_discount() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < app.components.size(); ++i) {
        if (!active[i]) {
            sum += app.components[i].discount;
        }
    }
    return sum;
}

void VmInstance::deactivate(const std::vector<int>& component_ids) {
    for (const int cid : component_ids) {
        bool found = false;
        for (std::size_t i = 0; i < app.components.size(); ++i) {
            if (app.components[i].id != cid) {
                continue;
            }
            if (!app.components[i].is_optional()) {
                throw DomainError("vm " + std::to_string(id) + ": component " + std::to_string(cid) +
                                  " is mandatory and cannot be deactivated");
            }
            active[i] = false;
            found = true;
            break;
        }
        if (!found) {
            throw DomainError("vm " + std::to_string(id) + ": unknown component " + std::to_string(cid));
        }
    }
}

void VmInstance::reactivate_all() {
    active.assign(app.components.size(), true);
}

double DataCenterState::host_utilization(int host_id, int t) const {
    const auto& host = hosts.at(static_cast<std::size_t>(host_id));
    double demand_mips = 0.0;
    for (const int vm_id : host.vm_ids) {
        const auto& vm = vms.at(static_cast<std::size_t>(vm_id));
        demand_mips += vm.effective_at(t) * vm.mips;
    }
    return demand_mips / host.capacity_mips;
}

double DataCenterState::host_power(int host_id, int t) const {
    const auto& host = hosts.at(static_cast<std::size_t>(host_id));
    if (host.state == HostState::Off) {
        return sleep_power == SleepPower::Table ? host.power.min_watts() : 0.0;
    }
    return power_at(host.power, std::min(1.0, host_utilization(host_id, t)));
}

int DataCenterState::active_host_count() const {
    int n = 0;
    for (const auto& host : hosts) {
        if (host.state == HostState::Active) {
            ++n;
        }
    }
    return n;
}

int DataCenterState::off_host_count() const {
    return static_cast<int>(hosts.size()) - active_host_count();
}

std::string check_placement_totality(const DataCenterState& state) {
    std::vector<int> seen(state.vms.size(), 0);
    for (const auto& host : state.hosts) {
        for (const int vm_id : host.vm_ids) {
            if (vm_id < 0 || static_cast<std::size_t>(vm_id) >= state.vms.size()) {
                return "host " + std::to_string(host.id) + " references unknown vm " + std::to_string(vm_id);
            }
            ++seen[static_cast<std::size_t>(vm_id)];
            if (state.vms[static_cast<std::size_t>(vm_id)].host_id != host.id) {
                return "vm " + std::to_string(vm_id) + " host_id disagrees with host " + std::to_string(host.id);
            }
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] != 1) {
            return "vm " + std::to_string(i) + " placed on " + std::to_string(seen[i]) + " hosts";
        }
    }
    return {};
}

std::string check_capacity(const DataCenterState& state, int t, double limit) {
    for (const auto& host : state.hosts) {
        const double u = state.host_utilization(host.id, t);
        if (u > limit) {
            return "host " + std::to_string(host.id) + " utilization " + std::to_string(u) + " exceeds capacity";
        }
    }
    return {};
}

std::string check_connection_closure(const DataCenterState& state) {
    for (const auto& vm : state.vms) {
        std::map<int, std::pair<bool, bool>> group_has;  // tag -> (active optional, deactivated optional)
        for (std::size_t i = 0; i < vm.app.components.size(); ++i) {
            const auto& c = vm.app.components[i];
            if (!c.is_optional() || !c.connection_tag) {
                continue;
            }
            auto& flags = group_has[*c.connection_tag];
            (vm.active[i] ? flags.first : flags.second) = true;
        }
        for (const auto& [tag, flags] : group_has) {
            if (flags.first && flags.second) {
                return "vm " + std::to_string(vm.id) + ": connection group " + std::to_string(tag) +
                       " mixes active and deactivated optional components";
            }
        }
    }
    return {};
}

std::string check_mandatory_safety(const DataCenterState& state) {
    for (const auto& vm : state.vms) {
        for (std::size_t i = 0; i < vm.app.components.size(); ++i) {
            if (!vm.app.components[i].is_optional() && !vm.active[i]) {
                return "vm " + std::to_string(vm.id) + ": mandatory component " +
                       std::to_string(vm.app.components[i].id) + " is deactivated";
            }
        }
    }
    return {};
}

}  // namespace brownsim
