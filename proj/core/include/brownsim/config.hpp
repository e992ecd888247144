#ifndef BROWNSIM_CONFIG_HPP
#define BROWNSIM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "brownsim/brownout.hpp"
#include "brownsim/placement.hpp"
#include "brownsim/workload.hpp"

namespace brownsim {

enum class Algorithm { Pco, Ubp, Eeba };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm algorithm);

// Everything a single simulation run depends on. JSON round-trips through
// load/from_json_text/to_json_text; the documented key schema lives in the
// README.
struct RunConfig {
    std::vector<int> hosts_per_type = {10, 10};   // by default_host_types order
    std::vector<int> vms_per_type = {10, 10, 10, 10};  // by default_vm_types order
    int horizon_intervals = 288;
    double interval_seconds = 300.0;

    Algorithm algorithm = Algorithm::Eeba;
    SelectionPolicy policy = SelectionPolicy::Lufcs;
    ConsolidationThresholds thresholds;
    double power_threshold = 0.8;  // TP, fraction of max wattage
    UbpFormula ubp_formula = UbpFormula::Corrected;
    SleepPower sleep_power = SleepPower::Zero;

    ComponentGenConfig components;
    TraceSource trace;

    std::uint64_t seed = 42;
    double alpha = 1.0;    // discount weight in the efficiency score
    double epsilon = 1.0;  // relative overload cost for the cost-ratio check

    // Optional overrides: a power-table file and per-host-type table names.
    std::optional<std::filesystem::path> power_table_file;
    std::vector<std::string> host_power_tables;

    // Per-host-type power model: the interpolated table (default) or the
    // linear idle + u x dynamic form derived from it, with idle taken from
    // the table's 50% column per its "(idle)" label.
    std::vector<std::string> power_models;  // "table" | "linear"

    // Baseline energy for the efficiency score printed by single runs.
    std::optional<double> baseline_energy_kwh;

    int total_hosts() const;
    int total_vms() const;
    bool homogeneous_fleet() const;

    void validate() const;

    static RunConfig load(const std::filesystem::path& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text(int indent = 2) const;
};

// Grid sweep over the component-generation parameters; discount follows the
// utilization threshold unless pinned explicitly.
struct SweepSpec {
    RunConfig base;
    std::vector<double> optional_utilization_thresholds = {0.25, 0.5, 0.75, 1.0};
    std::vector<double> optional_percentages = {0.5};
    std::vector<double> connected_percentages = {0.0};
    std::optional<std::vector<double>> discounts;  // default: tied to the threshold
    std::vector<std::string> algorithms = {"pco", "ubp", "eeba:lufcs"};
    std::vector<std::uint64_t> seeds = {42};
    int jobs = 1;

    void validate() const;

    static SweepSpec load(const std::filesystem::path& path);
    static SweepSpec from_json_text(const std::string& text);
};

// "pco", "ubp", or "eeba:<policy>".
std::pair<Algorithm, SelectionPolicy> parse_algorithm_spec(const std::string& spec);

}  // namespace brownsim

#endif
