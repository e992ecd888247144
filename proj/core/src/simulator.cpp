#include "brownsim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "brownsim/errors.hpp"

namespace brownsim {

namespace {

constexpr std::uint64_t kStreamComponents = 0x636f6d70ULL;
constexpr std::uint64_t kStreamUbp = 0x75627000ULL;

const PowerTable& resolve_power_table(const RunConfig& config, const std::vector<PowerTable>& file_tables,
                                      std::size_t host_type_index) {
    std::string name = default_host_types()[host_type_index].power_table;
    if (!config.host_power_tables.empty()) {
        name = config.host_power_tables[host_type_index];
    }
    for (const auto& table : file_tables) {
        if (table.name == name) {
            return table;
        }
    }
    return builtin_power_table(name);
}

}  // namespace

DataCenterState build_fleet(const RunConfig& config, std::ostream* diag) {
    config.validate();

    std::vector<PowerTable> file_tables;
    if (config.power_table_file) {
        file_tables = load_power_tables(*config.power_table_file);
    }

    std::vector<HostInstance> hosts;
    hosts.reserve(static_cast<std::size_t>(config.total_hosts()));
    for (std::size_t type = 0; type < config.hosts_per_type.size(); ++type) {
        const auto& spec = default_host_types()[type];
        PowerTable table = resolve_power_table(config, file_tables, type);
        table.validate();
        if (!config.power_models.empty() && config.power_models[type] == "linear") {
            // Idle power is the table's 50% column (its "(idle)" label);
            // dynamic power spans from there to the full-load wattage.
            const double idle = table.watts[5];
            table = PowerTable::linear(table.name + "-linear", idle, table.max_watts() - idle);
        }
        for (int i = 0; i < config.hosts_per_type[type]; ++i) {
            HostInstance host;
            host.id = static_cast<int>(hosts.size());
            host.type_index = static_cast<int>(type);
            host.capacity_mips = spec.capacity_mips();
            host.power = table;
            hosts.push_back(std::move(host));
        }
    }

    std::vector<VmInstance> vms;
    vms.reserve(static_cast<std::size_t>(config.total_vms()));
    for (std::size_t type = 0; type < config.vms_per_type.size(); ++type) {
        const auto& spec = default_vm_types()[type];
        for (int i = 0; i < config.vms_per_type[type]; ++i) {
            VmInstance vm;
            vm.id = static_cast<int>(vms.size());
            vm.type_index = static_cast<int>(type);
            vm.mips = spec.mips;
            Rng app_rng(derive_seed(config.seed, kStreamComponents, static_cast<std::uint64_t>(vm.id)));
            vm.app = generate_application(config.components, app_rng);
            vm.active.assign(vm.app.components.size(), true);
            vm.demand = make_demand_series(config.trace, config.seed, vm.id, config.horizon_intervals, diag);
            vms.push_back(std::move(vm));
        }
    }

    DataCenterState state = initial_placement(std::move(vms), std::move(hosts), config.interval_seconds, 0);
    state.sleep_power = config.sleep_power;
    return state;
}

void apply_plan(DataCenterState& state, const MigrationPlan& plan) {
    std::vector<char> moved(state.vms.size(), 0);
    for (const auto& move : plan.moves) {
        if (move.vm_id < 0 || static_cast<std::size_t>(move.vm_id) >= state.vms.size()) {
            throw PlanError("plan references unknown vm " + std::to_string(move.vm_id));
        }
        if (moved[static_cast<std::size_t>(move.vm_id)]) {
            throw PlanError("vm " + std::to_string(move.vm_id) + " appears twice in one plan");
        }
        moved[static_cast<std::size_t>(move.vm_id)] = 1;
        auto& vm = state.vms[static_cast<std::size_t>(move.vm_id)];
        if (vm.host_id != move.from_host) {
            throw PlanError("vm " + std::to_string(move.vm_id) + " is on host " + std::to_string(vm.host_id) +
                            ", plan expected " + std::to_string(move.from_host));
        }
        auto& src = state.hosts.at(static_cast<std::size_t>(move.from_host));
        auto& dst = state.hosts.at(static_cast<std::size_t>(move.to_host));
        src.vm_ids.erase(std::find(src.vm_ids.begin(), src.vm_ids.end(), move.vm_id));
        dst.vm_ids.push_back(move.vm_id);
        dst.state = HostState::Active;
        vm.host_id = move.to_host;
        if (state.host_utilization(dst.id, state.clock) > 1.0 + 1e-9) {
            throw PlanError("plan overloads host " + std::to_string(dst.id) + " beyond capacity");
        }
    }
    for (const int host_id : plan.hosts_to_switch_off) {
        auto& host = state.hosts.at(static_cast<std::size_t>(host_id));
        if (!host.vm_ids.empty()) {
            throw PlanError("plan switches off host " + std::to_string(host_id) + " which still hosts VMs");
        }
        host.state = HostState::Off;
    }
}

SimulationReport run(const RunConfig& config, std::ostream* diag, const RunHooks& hooks) {
    DataCenterState state = build_fleet(config, diag);
    const int horizon = config.horizon_intervals;
    const double dt = config.interval_seconds;
    const int total_hosts = static_cast<int>(state.hosts.size());
    const int total_vms = static_cast<int>(state.vms.size());

    Rng ubp_rng(derive_seed(config.seed, kStreamUbp));

    SimulationReport report;
    report.algorithm = to_string(config.algorithm);
    report.policy = config.algorithm == Algorithm::Eeba ? to_string(config.policy) : "";
    report.seed = config.seed;
    report.host_count = total_hosts;
    report.vm_count = total_vms;
    report.horizon = horizon;
    report.interval_seconds = dt;
    report.cost.homogeneous = config.homogeneous_fleet();
    report.series.reserve(static_cast<std::size_t>(horizon));
    report.config_echo_json = config.to_json_text();

    for (int t = 0; t < horizon; ++t) {
        state.clock = t;

        // Brownout ahead of consolidation; demand for this interval comes
        // straight from the per-VM series.
        std::vector<DeactivationRecord> records;
        int overloaded_before = 0;
        int overloaded_after = 0;
        MigrationPlan plan;
        try {
            overloaded_before = count_overloaded_hosts(state, config.power_threshold);
            if (config.algorithm == Algorithm::Eeba) {
                records = eeba_step(state, config.power_threshold, config.policy);
                overloaded_after = count_overloaded_hosts(state, config.power_threshold);
            } else {
                overloaded_after = overloaded_before;
            }

            if (config.algorithm == Algorithm::Ubp) {
                plan = ubp_consolidate(state, config.thresholds, config.ubp_formula, ubp_rng);
            } else {
                plan = pco_consolidate(state, config.thresholds);
            }
            apply_plan(state, plan);
        } catch (const std::exception& e) {
            throw Error("interval " + std::to_string(t) + ": " + e.what());
        }

        IntervalSample sample;
        sample.t = t;
        sample.host_power_w.reserve(state.hosts.size());
        for (const auto& host : state.hosts) {
            sample.host_power_w.push_back(state.host_power(host.id, t));
            sample.total_power_w += sample.host_power_w.back();
        }
        sample.energy_kwh = energy_of_interval(sample.total_power_w, sample.total_power_w, dt);
        sample.overloaded_count = overloaded_before;
        sample.overloaded_after_brownout = overloaded_after;
        sample.migrations = static_cast<int>(plan.moves.size());
        sample.deactivation_events = static_cast<int>(records.size());
        sample.deactivations = std::move(records);
        sample.active_hosts = state.active_host_count();
        sample.off_hosts = state.off_host_count();
        for (const auto& vm : state.vms) {
            sample.discount_sum += vm.vm_discount();
            sample.disabled_utilization += vm.requested_at(t) * vm.disabled_fraction();
        }
        // Wall-phase attribution for the cost accounting.
        const bool brownout_phase = sample.deactivation_events > 0;
        const bool migration_phase = sample.migrations > 0;

        report.total_energy_kwh += sample.energy_kwh;
        report.disabled_utilization_total += sample.disabled_utilization;
        report.migration_count += sample.migrations;
        report.deactivation_events += sample.deactivation_events;
        report.series.push_back(std::move(sample));
        if (hooks.after_interval) {
            hooks.after_interval(state, report.series.back());
        }

        double tb = 0.0;
        double tm = 0.0;
        if (brownout_phase && migration_phase) {
            tb = tm = dt / 2.0;
        } else if (brownout_phase) {
            tb = dt;
        } else if (migration_phase) {
            tm = dt;
        }
        report.cost.t_b_seconds += tb;
        report.cost.t_m_seconds += tm;
        report.cost.t_0_seconds += dt - tb - tm;
        report.cost.overload_seconds_brownout += tb * overloaded_before;
        report.cost.overload_seconds_migration += tm * overloaded_after;
        report.cost.max_overloaded = std::max({report.cost.max_overloaded, overloaded_before, overloaded_after});
    }

    double off_sum = 0.0;
    for (const auto& s : report.series) {
        off_sum += s.off_hosts;
    }
    report.mean_shutdown_hosts = horizon > 0 ? off_sum / horizon : 0.0;
    report.discount_fraction = discount_fraction(report.series, total_vms);
    return report;
}

}  // namespace brownsim
