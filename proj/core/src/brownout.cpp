#include "brownsim/brownout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "brownsim/errors.hpp"

namespace brownsim {

namespace {

struct SelectionUnit {
    std::vector<int> indices;  // into the candidate span
    int min_id = std::numeric_limits<int>::max();
    double utilization_sum = 0.0;
    double key = 0.0;
};

double unit_key(SelectionPolicy policy, std::span<const SelectableComponent> components,
                const SelectionUnit& unit) {
    double sum = 0.0;
    for (const int i : unit.indices) {
        const auto& c = components[static_cast<std::size_t>(i)];
        switch (policy) {
            case SelectionPolicy::Lufcs:
                sum += c.utilization;
                break;
            case SelectionPolicy::Lpfcs:
                sum += c.discount;
                break;
            case SelectionPolicy::Huprfcs:
                sum += c.discount > 0.0 ? c.utilization / c.discount : std::numeric_limits<double>::infinity();
                break;
            case SelectionPolicy::Nufcs:
                break;
        }
    }
    return sum / static_cast<double>(unit.indices.size());
}

}  // namespace

SelectionPolicy selection_policy_from_string(const std::string& name) {
    if (name == "nufcs") return SelectionPolicy::Nufcs;
    if (name == "lufcs") return SelectionPolicy::Lufcs;
    if (name == "lpfcs") return SelectionPolicy::Lpfcs;
    if (name == "huprfcs") return SelectionPolicy::Huprfcs;
    throw ConfigError("unknown selection policy '" + name + "' (expected nufcs|lufcs|lpfcs|huprfcs)");
}

std::string to_string(SelectionPolicy policy) {
    switch (policy) {
        case SelectionPolicy::Nufcs: return "nufcs";
        case SelectionPolicy::Lufcs: return "lufcs";
        case SelectionPolicy::Lpfcs: return "lpfcs";
        case SelectionPolicy::Huprfcs: return "huprfcs";
    }
    return "?";
}

int count_overloaded_hosts(const DataCenterState& state, double power_threshold) {
    if (!(power_threshold > 0.0 && power_threshold <= 1.0)) {
        throw DomainError("count_overloaded_hosts: power threshold outside (0, 1]");
    }
    int n = 0;
    for (const auto& host : state.hosts) {
        if (host.state != HostState::Active) {
            continue;
        }
        const double u = std::min(1.0, state.host_utilization(host.id, state.clock));
        if (power_at(host.power, u) > host.max_watts() * power_threshold) {
            ++n;
        }
    }
    return n;
}

double compute_dimmer(int overloaded_count, int total_hosts) {
    if (total_hosts <= 0) {
        throw DomainError("compute_dimmer: total_hosts must be > 0");
    }
    if (overloaded_count < 0 || overloaded_count > total_hosts) {
        throw DomainError("compute_dimmer: overloaded count outside [0, M]");
    }
    return std::sqrt(static_cast<double>(overloaded_count) / static_cast<double>(total_hosts));
}

double expected_host_utilization_reduction(const HostInstance& host, double utilization, double theta) {
    const double power = power_at(host.power, utilization);
    const double target = std::max(power - theta * power, host.power.min_watts());
    const double target_util = utilization_for_power(host.power, target).utilization;
    return std::clamp(utilization - target_util, 0.0, utilization);
}

double expected_vm_utilization_reduction(const VmInstance& vm, int t, double host_reduction) {
    if (vm.effective_at(t) <= 0.0) {
        return 0.0;
    }
    return std::clamp(host_reduction, 0.0, 1.0);
}

DeactivationRecord select_components(SelectionPolicy policy, std::span<const SelectableComponent> optional_components,
                                     double target, long* component_touches) {
    DeactivationRecord record;
    long touches = 0;
    if (optional_components.empty() || target <= 0.0) {
        return record;
    }

    std::vector<int> selected;
    if (policy == SelectionPolicy::Nufcs) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < optional_components.size(); ++i) {
            ++touches;
            const double dist = std::abs(optional_components[i].utilization - target);
            if (dist < best_dist ||
                (dist == best_dist && best >= 0 &&
                 optional_components[i].id < optional_components[static_cast<std::size_t>(best)].id)) {
                best = static_cast<int>(i);
                best_dist = dist;
            }
        }
        selected.push_back(best);
    } else {
        // Group connected components into one unit apiece.
        std::vector<SelectionUnit> units;
        std::map<int, std::size_t> unit_by_tag;
        for (std::size_t i = 0; i < optional_components.size(); ++i) {
            ++touches;
            const auto& c = optional_components[i];
            SelectionUnit* unit = nullptr;
            if (c.connection_tag) {
                const auto [it, inserted] = unit_by_tag.try_emplace(*c.connection_tag, units.size());
                if (inserted) {
                    units.emplace_back();
                }
                unit = &units[it->second];
            } else {
                units.emplace_back();
                unit = &units.back();
            }
            unit->indices.push_back(static_cast<int>(i));
            unit->min_id = std::min(unit->min_id, c.id);
            unit->utilization_sum += c.utilization;
        }
        for (auto& unit : units) {
            touches += static_cast<long>(unit.indices.size());
            unit.key = unit_key(policy, optional_components, unit);
        }
        const bool descending = policy == SelectionPolicy::Huprfcs;
        std::sort(units.begin(), units.end(), [&](const SelectionUnit& a, const SelectionUnit& b) {
            ++touches;
            if (a.key != b.key) {
                return descending ? a.key > b.key : a.key < b.key;
            }
            return a.min_id < b.min_id;
        });

        // Nearest prefix sum; ties favor the shorter prefix. The first
        // prefix at or past the target is always the turning point, so the
        // scan can stop there.
        std::size_t best_len = 1;
        double best_dist = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = 0; k < units.size(); ++k) {
            ++touches;
            sum += units[k].utilization_sum;
            const double dist = std::abs(sum - target);
            if (dist < best_dist) {
                best_dist = dist;
                best_len = k + 1;
            }
            if (sum >= target) {
                break;
            }
        }
        for (std::size_t k = 0; k < best_len; ++k) {
            for (const int i : units[k].indices) {
                selected.push_back(i);
            }
        }
    }

    // Close the selection under connection tags.
    std::vector<char> in_set(optional_components.size(), 0);
    std::vector<char> tag_selected_flags;
    std::map<int, char> tags;
    for (const int i : selected) {
        in_set[static_cast<std::size_t>(i)] = 1;
        const auto& tag = optional_components[static_cast<std::size_t>(i)].connection_tag;
        if (tag) {
            tags[*tag] = 1;
        }
    }
    for (std::size_t i = 0; i < optional_components.size(); ++i) {
        ++touches;
        const auto& c = optional_components[i];
        if (!in_set[i] && c.connection_tag && tags.count(*c.connection_tag) > 0) {
            in_set[i] = 1;
        }
    }

    for (std::size_t i = 0; i < optional_components.size(); ++i) {
        if (!in_set[i]) {
            continue;
        }
        record.component_ids.push_back(optional_components[i].id);
        record.utilization_disabled += optional_components[i].utilization;
        record.discount_added += optional_components[i].discount;
    }
    std::sort(record.component_ids.begin(), record.component_ids.end());
    if (component_touches != nullptr) {
        *component_touches += touches;
    }
    return record;
}

std::vector<DeactivationRecord> eeba_step(DataCenterState& state, double power_threshold, SelectionPolicy policy,
                                          StepStats* stats) {
    const int total_hosts = static_cast<int>(state.hosts.size());
    const int overloaded = count_overloaded_hosts(state, power_threshold);
    if (stats != nullptr) {
        stats->hosts_scanned += total_hosts;
    }

    std::vector<DeactivationRecord> records;
    if (overloaded == 0) {
        for (auto& vm : state.vms) {
            vm.reactivate_all();
        }
        return records;
    }

    const double theta = compute_dimmer(overloaded, total_hosts);
    for (const auto& host : state.hosts) {
        if (host.state != HostState::Active) {
            continue;
        }
        const double utilization = std::min(1.0, state.host_utilization(host.id, state.clock));
        if (power_at(host.power, utilization) <= host.max_watts() * power_threshold) {
            continue;
        }
        const double host_reduction = expected_host_utilization_reduction(host, utilization, theta);
        if (host_reduction <= 0.0) {
            continue;
        }
        std::vector<int> resident = host.vm_ids;
        std::sort(resident.begin(), resident.end());
        for (const int vm_id : resident) {
            auto& vm = state.vms[static_cast<std::size_t>(vm_id)];
            if (stats != nullptr) {
                ++stats->vms_processed;
            }
            const double target = expected_vm_utilization_reduction(vm, state.clock, host_reduction);
            if (target <= 0.0) {
                continue;
            }
            std::vector<SelectableComponent> candidates;
            for (std::size_t i = 0; i < vm.app.components.size(); ++i) {
                const auto& c = vm.app.components[i];
                if (c.is_optional() && vm.active[i]) {
                    candidates.push_back({c.id, c.utilization, c.discount, c.connection_tag});
                }
            }
            auto record = select_components(policy, candidates, target,
                                            stats != nullptr ? &stats->component_touches : nullptr);
            if (record.empty()) {
                continue;
            }
            record.vm_id = vm.id;
            record.host_id = host.id;
            record.interval = state.clock;
            vm.deactivate(record.component_ids);
            records.push_back(std::move(record));
        }
    }
    return records;
}

}  // namespace brownsim
