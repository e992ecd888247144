#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "../common/fixtures.hpp"
#include "brownsim/errors.hpp"
#include "brownsim/simulator.hpp"

using namespace brownsim;
using namespace brownsim::testing;

TEST_CASE("fleet construction expands types and seeds demand") {
    auto cfg = desk_config(42);
    const auto state = build_fleet(cfg);
    CHECK(state.hosts.size() == 20);
    CHECK(state.vms.size() == 40);
    CHECK(state.hosts[0].capacity_mips == doctest::Approx(3720.0));
    CHECK(state.hosts[19].capacity_mips == doctest::Approx(5320.0));
    CHECK(state.vms[0].mips == doctest::Approx(2500.0));
    CHECK(state.vms[39].mips == doctest::Approx(500.0));
    CHECK(check_placement_totality(state).empty());
    CHECK(check_capacity(state, 0).empty());

    const auto again = build_fleet(cfg);
    for (std::size_t i = 0; i < state.vms.size(); ++i) {
        CHECK(state.vms[i].demand == again.vms[i].demand);
        CHECK(state.vms[i].host_id == again.vms[i].host_id);
    }
}

TEST_CASE("per-type linear power model derives from the table") {
    auto cfg = desk_config(1);
    cfg.power_models = {"linear", "table"};
    const auto state = build_fleet(cfg);
    // Host type 1 becomes linear: idle = 50% column (156 W), full load 247 W.
    const auto& linear = state.hosts[0].power;
    CHECK(power_at(linear, 0.0) == doctest::Approx(156.0));
    CHECK(power_at(linear, 1.0) == doctest::Approx(247.0));
    CHECK(power_at(linear, 0.5) == doctest::Approx((156.0 + 247.0) / 2.0));
    // Host type 2 keeps the measured curve.
    CHECK(state.hosts[19].power.watts[0] == doctest::Approx(58.4));

    cfg.power_models = {"linear"};
    CHECK_THROWS_AS(build_fleet(cfg), ConfigError);
    cfg.power_models = {"cubic", "table"};
    CHECK_THROWS_AS(build_fleet(cfg), ConfigError);
}

TEST_CASE("power tables can come from a tabular file") {
    const auto dir = std::filesystem::temp_directory_path() / "brownsim_sim_tables";
    std::filesystem::create_directories(dir);
    const auto path = dir / "tables.csv";
    {
        std::ofstream out(path);
        out << "flatbox, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10\n";
    }
    auto cfg = desk_config(1);
    cfg.horizon_intervals = 4;
    cfg.power_table_file = path;
    cfg.host_power_tables = {"flatbox", "ibm_x3550m3_x5675"};
    const auto state = build_fleet(cfg);
    CHECK(state.hosts[0].power.name == "flatbox");
    CHECK(state.hosts[0].power.max_watts() == doctest::Approx(10.0));
    CHECK(state.hosts[19].power.name == "ibm_x3550m3_x5675");

    cfg.host_power_tables = {"no_such_table", "ibm_x3550m3_x5675"};
    CHECK_THROWS_AS(build_fleet(cfg), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("plan application moves, powers on and switches off") {
    const auto& table = builtin_power_table("ibm_x3550m3_x5670");
    DataCenterState state;
    state.hosts = {make_host(0, 1000.0, table), make_host(1, 1000.0, table)};
    state.hosts[0].state = HostState::Active;
    state.hosts[0].vm_ids = {0};
    state.vms = {make_vm(0, 1000.0, {0.5}, opaque_app())};
    state.vms[0].host_id = 0;

    SUBCASE("empty plan is the identity") {
        const auto before_host = state.vms[0].host_id;
        apply_plan(state, {});
        CHECK(state.vms[0].host_id == before_host);
    }

    SUBCASE("moving the last VM off a host lets the plan switch it off") {
        MigrationPlan plan;
        plan.moves = {{0, 0, 1}};
        plan.hosts_to_switch_off = {0};
        apply_plan(state, plan);
        CHECK(state.vms[0].host_id == 1);
        CHECK(state.hosts[0].state == HostState::Off);
        CHECK(state.hosts[1].state == HostState::Active);
    }

    SUBCASE("duplicate VM moves are rejected") {
        MigrationPlan plan;
        plan.moves = {{0, 0, 1}, {0, 1, 0}};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }

    SUBCASE("stale source host is rejected") {
        MigrationPlan plan;
        plan.moves = {{0, 1, 0}};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }

    SUBCASE("switching off a non-empty host is rejected") {
        MigrationPlan plan;
        plan.hosts_to_switch_off = {0};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }

    SUBCASE("capacity violations are rejected") {
        state.vms.push_back(make_vm(1, 1000.0, {0.7}, opaque_app()));
        state.vms[1].host_id = 1;
        state.hosts[1].state = HostState::Active;
        state.hosts[1].vm_ids = {1};
        MigrationPlan plan;
        plan.moves = {{0, 0, 1}};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }
}

TEST_CASE("zero demand collapses to one idle host") {
    auto cfg = desk_config(1);
    cfg.hosts_per_type = {2, 2};
    cfg.vms_per_type = {1, 1, 1, 1};
    cfg.horizon_intervals = 48;
    cfg.trace.kind = TraceSource::Kind::Constant;
    cfg.trace.constant_level = 0.0;
    cfg.algorithm = Algorithm::Pco;

    const auto report = run(cfg);
    // Everything packs onto the single cheapest host, which can never be
    // evacuated; total energy is exactly that host's idle draw.
    const double idle_watts = builtin_power_table("ibm_x3550m3_x5675").watts[0];
    const double expected = idle_watts * 300.0 * 48 / 3.6e6;
    CHECK(report.total_energy_kwh == doctest::Approx(expected).epsilon(1e-9));
    for (const auto& s : report.series) {
        CHECK(s.active_hosts == 1);
        CHECK(s.off_hosts == 3);
    }
}

TEST_CASE("runs are deterministic in config and seed") {
    auto cfg = desk_config(7);
    cfg.horizon_intervals = 32;
    for (const auto algorithm : {Algorithm::Pco, Algorithm::Ubp, Algorithm::Eeba}) {
        cfg.algorithm = algorithm;
        const auto a = run(cfg);
        const auto b = run(cfg);
        CHECK(a.total_energy_kwh == b.total_energy_kwh);
        CHECK(a.discount_fraction == b.discount_fraction);
        CHECK(a.migration_count == b.migration_count);
        CHECK(a.deactivation_events == b.deactivation_events);
        REQUIRE(a.series.size() == b.series.size());
        for (std::size_t i = 0; i < a.series.size(); ++i) {
            CHECK(a.series[i].total_power_w == b.series[i].total_power_w);
            CHECK(a.series[i].migrations == b.series[i].migrations);
        }
    }
}

TEST_CASE("reports are internally consistent and conserve VMs") {
    auto cfg = desk_config(3);
    cfg.horizon_intervals = 64;
    for (const auto algorithm : {Algorithm::Pco, Algorithm::Ubp, Algorithm::Eeba}) {
        cfg.algorithm = algorithm;
        int vm_count_final = -1;
        RunHooks hooks;
        hooks.after_interval = [&](const DataCenterState& state, const IntervalSample& sample) {
            int placed = 0;
            for (const auto& host : state.hosts) {
                placed += static_cast<int>(host.vm_ids.size());
            }
            vm_count_final = placed;
            CHECK(check_placement_totality(state).empty());
            CHECK(sample.host_power_w.size() == state.hosts.size());
            CHECK(static_cast<int>(sample.deactivations.size()) == sample.deactivation_events);
        };
        const auto report = run(cfg, nullptr, hooks);
        CHECK(vm_count_final == 40);
        CHECK(check_report_consistency(report).empty());
        CHECK(report.series.size() == 64);
        if (algorithm != Algorithm::Eeba) {
            CHECK(report.discount_fraction == 0.0);
            CHECK(report.deactivation_events == 0);
        }
    }
}

TEST_CASE("golden regression: pco on the reference scenario") {
    std::ifstream in(std::string(BROWNSIM_TEST_DATA_DIR) + "/golden_pco_desk.json");
    REQUIRE(in.good());
    const auto golden = nlohmann::json::parse(in);

    auto cfg = desk_config(42);
    cfg.algorithm = Algorithm::Pco;
    const auto report = run(cfg);
    CHECK(report.total_energy_kwh == doctest::Approx(golden.at("energy_kwh").get<double>()).epsilon(1e-9));
    CHECK(report.migration_count == golden.at("migrations").get<long>());
    CHECK(report.mean_shutdown_hosts ==
          doctest::Approx(golden.at("mean_shutdown_hosts").get<double>()).epsilon(1e-9));
}

TEST_CASE("brownout lowers energy against its own baseline scenario") {
    auto cfg = desk_config(5);
    cfg.horizon_intervals = 96;
    cfg.components.optional_utilization_threshold = 1.0;
    cfg.components.discount_total = 1.0;
    cfg.components.pattern = ComponentPattern::Approximate;

    cfg.algorithm = Algorithm::Pco;
    const auto pco = run(cfg);
    cfg.algorithm = Algorithm::Eeba;
    cfg.policy = SelectionPolicy::Lufcs;
    const auto eeba = run(cfg);

    CHECK(eeba.total_energy_kwh < pco.total_energy_kwh);
    CHECK(eeba.discount_fraction > 0.0);
}
