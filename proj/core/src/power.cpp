#include "brownsim/power.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "brownsim/errors.hpp"

namespace brownsim {

namespace {

constexpr double kGridSnap = 1e-9;

double parse_watts_field(const std::string& field, const std::filesystem::path& path, int line_no) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(field, &pos);
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) {
            ++pos;
        }
        if (pos != field.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return value;
    } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad wattage field '" + field + "'");
    }
}

}  // namespace

PowerTable PowerTable::linear(std::string name, double idle_watts, double dynamic_watts) {
    if (idle_watts < 0.0 || dynamic_watts < 0.0) {
        throw ConfigError("linear power model requires idle_watts >= 0 and dynamic_watts >= 0");
    }
    PowerTable table;
    table.name = std::move(name);
    for (int k = 0; k <= 10; ++k) {
        table.watts[static_cast<std::size_t>(k)] = idle_watts + dynamic_watts * (k / 10.0);
    }
    return table;
}

void PowerTable::validate() const {
    if (watts[0] < 0.0) {
        throw ConfigError("power table '" + name + "': negative wattage");
    }
    for (std::size_t k = 1; k < watts.size(); ++k) {
        if (watts[k] < watts[k - 1]) {
            throw ConfigError("power table '" + name + "': wattage must be non-decreasing");
        }
    }
}

double power_at(const PowerTable& table, double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("power_at: utilization " + std::to_string(u) + " outside [0, 1]");
    }
    const double scaled = u * 10.0;
    const auto nearest = static_cast<int>(std::llround(scaled));
    if (std::abs(scaled - nearest) <= kGridSnap) {
        return table.watts[static_cast<std::size_t>(nearest)];
    }
    const auto k = static_cast<std::size_t>(scaled);  // floor; u < 1 here
    const double frac = scaled - static_cast<double>(k);
    return table.watts[k] + frac * (table.watts[k + 1] - table.watts[k]);
}

UtilizationLookup utilization_for_power(const PowerTable& table, double watts) {
    if (watts < table.min_watts()) {
        return {0.0, true};
    }
    if (watts > table.max_watts()) {
        return {1.0, true};
    }
    // Exact grid hits resolve first so the round trip through power_at is
    // bit-exact; scanning upward gives the lower bound on flat segments.
    for (int k = 0; k <= 10; ++k) {
        if (watts == table.watts[static_cast<std::size_t>(k)]) {
            return {k / 10.0, false};
        }
    }
    for (int k = 0; k < 10; ++k) {
        const double lo = table.watts[static_cast<std::size_t>(k)];
        const double hi = table.watts[static_cast<std::size_t>(k) + 1];
        if (watts > lo && watts < hi) {
            return {(k + (watts - lo) / (hi - lo)) / 10.0, false};
        }
    }
    // Unreachable for a validated table; keep the clamp as a safety net.
    return {1.0, true};
}

double energy_of_interval(double p_start_watts, double p_end_watts, double dt_seconds) {
    if (p_start_watts < 0.0 || p_end_watts < 0.0) {
        throw DomainError("energy_of_interval: negative power");
    }
    if (dt_seconds <= 0.0) {
        throw DomainError("energy_of_interval: non-positive interval length");
    }
    return 0.5 * (p_start_watts + p_end_watts) * dt_seconds / 3.6e6;
}

const std::vector<PowerTable>& builtin_power_tables() {
    static const std::vector<PowerTable> tables = {
        {"ibm_x3550m3_x5670", {66.0, 107.0, 120.0, 131.0, 143.0, 156.0, 173.0, 191.0, 211.0, 229.0, 247.0}},
        {"ibm_x3550m3_x5675", {58.4, 98.0, 109.0, 118.0, 128.0, 140.0, 153.0, 170.0, 189.0, 205.0, 222.0}},
    };
    return tables;
}

const PowerTable& builtin_power_table(std::string_view name) {
    for (const auto& table : builtin_power_tables()) {
        if (table.name == name) {
            return table;
        }
    }
    throw ConfigError("unknown built-in power table '" + std::string(name) + "'");
}

std::vector<PowerTable> load_power_tables(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open power table file: " + path.string());
    }
    std::vector<PowerTable> tables;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') {
            continue;
        }
        std::stringstream fields(line);
        std::string field;
        std::vector<std::string> parts;
        while (std::getline(fields, field, ',')) {
            parts.push_back(field);
        }
        if (parts.size() != 12) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 'name, w0, w10, ..., w100' (12 fields), got " +
                             std::to_string(parts.size()));
        }
        PowerTable table;
        const auto name_begin = parts[0].find_first_not_of(" \t");
        const auto name_end = parts[0].find_last_not_of(" \t\r");
        table.name = name_begin == std::string::npos ? "" : parts[0].substr(name_begin, name_end - name_begin + 1);
        if (table.name.empty()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty table name");
        }
        for (int k = 0; k <= 10; ++k) {
            table.watts[static_cast<std::size_t>(k)] = parse_watts_field(parts[static_cast<std::size_t>(k) + 1], path, line_no);
        }
        table.validate();
        tables.push_back(std::move(table));
    }
    if (tables.empty()) {
        throw ParseError(path.string() + ": no power tables found");
    }
    return tables;
}

}  // namespace brownsim
