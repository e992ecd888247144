#ifndef BROWNSIM_REPORT_IO_HPP
#define BROWNSIM_REPORT_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "brownsim/metrics.hpp"

namespace brownsim {

// One row of the results table; the flattened view of a report that the
// sweep/compare tooling exchanges through CSV.
struct ResultRow {
    std::string algorithm;
    std::string policy;
    std::uint64_t seed = 0;
    double optional_utilization_threshold = 0.0;
    double optional_percentage = 0.0;
    double connected_percentage = 0.0;
    double discount = 0.0;
    std::string pattern;
    double alpha = 1.0;
    int hosts = 0;
    int vms = 0;
    int horizon = 0;
    double energy_kwh = 0.0;
    double discount_fraction = 0.0;
    double disabled_utilization = 0.0;
    double mean_shutdown_hosts = 0.0;
    long migrations = 0;
    long deactivations = 0;
};

ResultRow to_result_row(const SimulationReport& report);

// results.csv: schema-versioned header plus one row per report.
void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

// series.csv: the per-interval samples of a single run.
void write_series_csv(const std::filesystem::path& path, const SimulationReport& report);

// summary.json: aggregates (with 95% CIs when more than one report) plus
// the config echo and seeds, deterministic byte-for-byte.
void write_summary_json(const std::filesystem::path& path, std::span<const SimulationReport> reports);

// Deterministic float formatting shared by every table writer.
std::string format_double(double value);

}  // namespace brownsim

#endif
