#include "brownsim/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brownsim/errors.hpp"

namespace brownsim {

namespace {

// Mutable view of a placement while a plan is being built. All candidate
// checks and power deltas are evaluated against this copy, so a finished
// plan replays cleanly on the original state.
struct Working {
    const DataCenterState* state = nullptr;
    int t = 0;
    std::vector<double> util;
    std::vector<std::vector<int>> vm_lists;
    std::vector<char> active;
    std::vector<char> received;
    std::vector<char> scheduled_off;
    std::vector<double> vm_load_mips;
    std::vector<double> vm_frac;

    explicit Working(const DataCenterState& s) : state(&s), t(s.clock) {
        const auto n_hosts = s.hosts.size();
        util.resize(n_hosts, 0.0);
        vm_lists.resize(n_hosts);
        active.resize(n_hosts, 0);
        received.resize(n_hosts, 0);
        scheduled_off.resize(n_hosts, 0);
        vm_load_mips.resize(s.vms.size(), 0.0);
        vm_frac.resize(s.vms.size(), 0.0);
        for (const auto& vm : s.vms) {
            vm_frac[static_cast<std::size_t>(vm.id)] = vm.effective_at(t);
            vm_load_mips[static_cast<std::size_t>(vm.id)] = vm_frac[static_cast<std::size_t>(vm.id)] * vm.mips;
        }
        for (const auto& host : s.hosts) {
            const auto h = static_cast<std::size_t>(host.id);
            active[h] = host.state == HostState::Active ? 1 : 0;
            vm_lists[h] = host.vm_ids;
            double load = 0.0;
            for (const int vm_id : host.vm_ids) {
                load += vm_load_mips[static_cast<std::size_t>(vm_id)];
            }
            util[h] = load / host.capacity_mips;
        }
    }

    double util_after(int host_id, int vm_id) const {
        const auto h = static_cast<std::size_t>(host_id);
        return util[h] + vm_load_mips[static_cast<std::size_t>(vm_id)] / state->hosts[h].capacity_mips;
    }

    void move_vm(int vm_id, int from_host, int to_host) {
        auto& src = vm_lists[static_cast<std::size_t>(from_host)];
        src.erase(std::find(src.begin(), src.end(), vm_id));
        vm_lists[static_cast<std::size_t>(to_host)].push_back(vm_id);
        const double load = vm_load_mips[static_cast<std::size_t>(vm_id)];
        auto& from_util = util[static_cast<std::size_t>(from_host)];
        from_util = std::max(0.0, from_util - load / state->hosts[static_cast<std::size_t>(from_host)].capacity_mips);
        util[static_cast<std::size_t>(to_host)] += load / state->hosts[static_cast<std::size_t>(to_host)].capacity_mips;
        active[static_cast<std::size_t>(to_host)] = 1;
        received[static_cast<std::size_t>(to_host)] = 1;
    }
};

// Least-power-increase destination for a VM: active hosts first, an Off
// host only when allowed and nothing active fits. Ties break by host id.
int least_power_destination(const Working& w, int vm_id, double cap_limit, int exclude_host, bool allow_power_on) {
    int best = -1;
    double best_delta = std::numeric_limits<double>::infinity();
    for (const auto& host : w.state->hosts) {
        const auto h = static_cast<std::size_t>(host.id);
        if (host.id == exclude_host || !w.active[h] || w.scheduled_off[h]) {
            continue;
        }
        const double after = w.util_after(host.id, vm_id);
        if (after > cap_limit + 1e-12) {
            continue;
        }
        const double delta = power_at(host.power, std::clamp(after, 0.0, 1.0)) -
                             power_at(host.power, std::clamp(w.util[h], 0.0, 1.0));
        if (delta < best_delta - 1e-12) {
            best = host.id;
            best_delta = delta;
        }
    }
    if (best >= 0 || !allow_power_on) {
        return best;
    }
    for (const auto& host : w.state->hosts) {
        const auto h = static_cast<std::size_t>(host.id);
        if (host.id == exclude_host || w.active[h] || w.scheduled_off[h]) {
            continue;
        }
        const double after = w.util_after(host.id, vm_id);
        if (after > cap_limit + 1e-12) {
            continue;
        }
        const double delta = power_at(host.power, std::clamp(after, 0.0, 1.0));
        if (delta < best_delta - 1e-12) {
            best = host.id;
            best_delta = delta;
        }
    }
    return best;
}

// VM ids ordered by decreasing load; ties by ascending id.
std::vector<int> by_decreasing_load(const Working& w, const std::vector<int>& vm_ids) {
    std::vector<int> order = vm_ids;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double fa = w.vm_frac[static_cast<std::size_t>(a)];
        const double fb = w.vm_frac[static_cast<std::size_t>(b)];
        if (fa != fb) {
            return fa > fb;
        }
        return a < b;
    });
    return order;
}

// Shared under-utilization pass: evacuate hosts below `lower` when every VM
// fits on another active host, then schedule every emptied host Off. Hosts
// that received a VM in this plan are left alone so no VM moves twice.
void consolidate_underutilized(Working& w, const ConsolidationThresholds& thresholds, MigrationPlan& plan) {
    for (const auto& host : w.state->hosts) {
        const auto h = static_cast<std::size_t>(host.id);
        if (!w.active[h] || w.scheduled_off[h] || w.received[h]) {
            continue;
        }
        if (w.vm_lists[h].empty()) {
            w.scheduled_off[h] = 1;
            plan.hosts_to_switch_off.push_back(host.id);
            continue;
        }
        if (w.util[h] >= thresholds.lower) {
            continue;
        }
        std::vector<Move> trial;
        std::vector<char> newly_received(w.received.size(), 0);
        bool ok = true;
        for (const int vm_id : by_decreasing_load(w, w.vm_lists[h])) {
            const int dest = least_power_destination(w, vm_id, thresholds.upper, host.id, /*allow_power_on=*/false);
            if (dest < 0) {
                ok = false;
                break;
            }
            if (!w.received[static_cast<std::size_t>(dest)]) {
                newly_received[static_cast<std::size_t>(dest)] = 1;
            }
            w.move_vm(vm_id, host.id, dest);
            trial.push_back({vm_id, host.id, dest});
        }
        if (ok) {
            plan.moves.insert(plan.moves.end(), trial.begin(), trial.end());
            w.scheduled_off[h] = 1;
            plan.hosts_to_switch_off.push_back(host.id);
        } else {
            for (auto it = trial.rbegin(); it != trial.rend(); ++it) {
                w.move_vm(it->vm_id, it->to_host, it->from_host);
            }
            // move_vm marks sources as receivers when rolling back; restore
            // the flags exactly as they were before the trial.
            w.received[h] = 0;
            for (std::size_t i = 0; i < newly_received.size(); ++i) {
                if (newly_received[i]) {
                    w.received[i] = 0;
                }
            }
        }
    }
}

}  // namespace

void ConsolidationThresholds::validate() const {
    if (!(lower >= 0.0 && lower < upper && upper <= 1.0)) {
        throw ConfigError("thresholds: require 0 <= lower < upper <= 1");
    }
    if (!(lambda > 0.0)) {
        throw ConfigError("thresholds: lambda must be > 0");
    }
}

DataCenterState initial_placement(std::vector<VmInstance> vms, std::vector<HostInstance> hosts,
                                  double interval_seconds, int t) {
    DataCenterState state;
    state.hosts = std::move(hosts);
    state.vms = std::move(vms);
    state.clock = t;
    state.interval_seconds = interval_seconds;
    for (auto& host : state.hosts) {
        host.vm_ids.clear();
        host.state = HostState::Off;
    }
    for (auto& vm : state.vms) {
        vm.host_id = -1;
    }

    Working w(state);
    std::vector<int> order(state.vms.size());
    for (std::size_t i = 0; i < state.vms.size(); ++i) {
        order[i] = state.vms[i].id;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double fa = w.vm_frac[static_cast<std::size_t>(a)];
        const double fb = w.vm_frac[static_cast<std::size_t>(b)];
        if (fa != fb) {
            return fa > fb;
        }
        return a < b;
    });

    for (const int vm_id : order) {
        const int dest = least_power_destination(w, vm_id, 1.0, /*exclude_host=*/-1, /*allow_power_on=*/true);
        if (dest < 0) {
            throw PlacementError("initial placement: vm " + std::to_string(vm_id) + " does not fit on any host");
        }
        const auto h = static_cast<std::size_t>(dest);
        w.util[h] = w.util_after(dest, vm_id);
        w.vm_lists[h].push_back(vm_id);
        w.active[h] = 1;
        state.vms[static_cast<std::size_t>(vm_id)].host_id = dest;
        state.hosts[h].vm_ids.push_back(vm_id);
        state.hosts[h].state = HostState::Active;
    }
    return state;
}

MigrationPlan pco_consolidate(const DataCenterState& state, const ConsolidationThresholds& thresholds) {
    thresholds.validate();
    MigrationPlan plan;
    Working w(state);
    for (const auto& host : state.hosts) {
        const auto h = static_cast<std::size_t>(host.id);
        if (!w.active[h] || w.util[h] <= thresholds.upper) {
            continue;
        }
        for (const int vm_id : by_decreasing_load(w, w.vm_lists[h])) {
            if (w.util[h] <= thresholds.upper) {
                break;
            }
            const int dest = least_power_destination(w, vm_id, thresholds.upper, host.id, /*allow_power_on=*/true);
            if (dest < 0) {
                plan.unplaced_vm_ids.push_back(vm_id);
                continue;
            }
            w.move_vm(vm_id, host.id, dest);
            plan.moves.push_back({vm_id, host.id, dest});
        }
    }
    consolidate_underutilized(w, thresholds, plan);
    return plan;
}

double ubp_migration_probability(double u, const ConsolidationThresholds& thresholds, UbpFormula formula) {
    if (u < 0.0) {
        throw DomainError("ubp_migration_probability: utilization must be >= 0");
    }
    if (thresholds.upper >= 1.0) {
        throw DomainError("ubp_migration_probability: upper threshold of 1 makes the curve degenerate");
    }
    const double span = 1.0 - thresholds.upper;
    const double base = formula == UbpFormula::Corrected ? 1.0 - (1.0 - u) / span : 1.0 - (u - 1.0) / span;
    if (base <= 0.0) {
        return 0.0;
    }
    return std::min(1.0, std::pow(base, thresholds.lambda));
}

MigrationPlan ubp_consolidate(const DataCenterState& state, const ConsolidationThresholds& thresholds,
                              UbpFormula formula, Rng& rng) {
    thresholds.validate();
    MigrationPlan plan;
    Working w(state);
    for (const auto& host : state.hosts) {
        const auto h = static_cast<std::size_t>(host.id);
        if (!w.active[h] || w.util[h] <= thresholds.upper) {
            continue;
        }
        const double p = ubp_migration_probability(w.util[h], thresholds, formula);
        std::vector<int> selected;
        std::vector<int> resident = w.vm_lists[h];
        std::sort(resident.begin(), resident.end());
        for (const int vm_id : resident) {
            if (uniform01(rng) < p) {
                selected.push_back(vm_id);
            }
        }
        for (const int vm_id : selected) {
            const int dest = least_power_destination(w, vm_id, thresholds.upper, host.id, /*allow_power_on=*/true);
            if (dest < 0) {
                plan.unplaced_vm_ids.push_back(vm_id);
                continue;
            }
            w.move_vm(vm_id, host.id, dest);
            plan.moves.push_back({vm_id, host.id, dest});
        }
    }
    consolidate_underutilized(w, thresholds, plan);
    return plan;
}

}  // namespace brownsim
