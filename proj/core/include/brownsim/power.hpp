#ifndef BROWNSIM_POWER_HPP
#define BROWNSIM_POWER_HPP

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace brownsim {

// Measured server wattage at utilization 0%, 10%, ..., 100%.
struct PowerTable {
    std::string name;
    std::array<double, 11> watts{};

    double min_watts() const { return watts.front(); }
    double max_watts() const { return watts.back(); }

    // Synthesizes the linear idle + u * dynamic model as an 11-point table,
    // so the interpolating lookup and its inverse apply unchanged.
    static PowerTable linear(std::string name, double idle_watts, double dynamic_watts);

    // Throws ConfigError unless watts is non-negative and non-decreasing.
    void validate() const;
};

// Interpolated wattage at utilization u in [0, 1]; exact at grid points.
double power_at(const PowerTable& table, double u);

struct UtilizationLookup {
    double utilization = 0.0;
    bool clamped = false;
};

// Piecewise-linear inverse of power_at. Flat segments resolve to the
// segment's lower utilization bound; wattage outside the table range clamps
// to 0% or 100% and sets the clamped flag.
UtilizationLookup utilization_for_power(const PowerTable& table, double watts);

// Trapezoidal energy over an interval, in kWh.
double energy_of_interval(double p_start_watts, double p_end_watts, double dt_seconds);

// Built-in tables for the two IBM x3550 M3 servers (Xeon X5670 / X5675).
const PowerTable& builtin_power_table(std::string_view name);
const std::vector<PowerTable>& builtin_power_tables();

// Loads tables from a plain-text file, one per line:
//   name, w0, w10, ..., w100
// Blank lines and lines starting with '#' are skipped.
std::vector<PowerTable> load_power_tables(const std::filesystem::path& path);

}  // namespace brownsim

#endif
