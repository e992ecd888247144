#include "brownsim/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "brownsim/errors.hpp"
#include "brownsim/stats.hpp"

namespace brownsim {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kResultsSchema = "# brownsim.results.v1";
constexpr const char* kSeriesSchema = "# brownsim.series.v1";
constexpr const char* kResultsHeader =
    "algorithm,policy,seed,optional_utilization_threshold,optional_percentage,connected_percentage,discount,"
    "pattern,alpha,hosts,vms,horizon,energy_kwh,discount_fraction,disabled_utilization,mean_shutdown_hosts,"
    "migrations,deactivations";

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

ResultRow to_result_row(const SimulationReport& report) {
    ResultRow row;
    row.algorithm = report.algorithm;
    row.policy = report.policy;
    row.seed = report.seed;
    row.hosts = report.host_count;
    row.vms = report.vm_count;
    row.horizon = report.horizon;
    row.energy_kwh = report.total_energy_kwh;
    row.discount_fraction = report.discount_fraction;
    row.disabled_utilization = report.disabled_utilization_total;
    row.mean_shutdown_hosts = report.mean_shutdown_hosts;
    row.migrations = report.migration_count;
    row.deactivations = report.deactivation_events;
    if (!report.config_echo_json.empty()) {
        const auto j = ordered_json::parse(report.config_echo_json);
        const auto& c = j.at("components");
        row.optional_utilization_threshold = c.at("optional_utilization_threshold").get<double>();
        row.optional_percentage = c.at("optional_percentage").get<double>();
        row.connected_percentage = c.at("connected_percentage").get<double>();
        row.discount = c.at("discount").get<double>();
        row.pattern = c.at("pattern").get<std::string>();
        row.alpha = j.at("alpha").get<double>();
    }
    return row;
}

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    auto out = open_out(path);
    out << kResultsSchema << "\n" << kResultsHeader << "\n";
    for (const auto& r : rows) {
        out << r.algorithm << ',' << r.policy << ',' << r.seed << ','
            << format_double(r.optional_utilization_threshold) << ',' << format_double(r.optional_percentage) << ','
            << format_double(r.connected_percentage) << ',' << format_double(r.discount) << ',' << r.pattern << ','
            << format_double(r.alpha) << ',' << r.hosts << ',' << r.vms << ',' << r.horizon << ','
            << format_double(r.energy_kwh) << ',' << format_double(r.discount_fraction) << ','
            << format_double(r.disabled_utilization) << ',' << format_double(r.mean_shutdown_hosts) << ','
            << r.migrations << ',' << r.deactivations << "\n";
    }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open results file: " + path.string());
    }
    std::vector<ResultRow> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != kResultsHeader) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unexpected results header");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 18) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 18 fields, got " +
                             std::to_string(fields.size()));
        }
        try {
            ResultRow r;
            r.algorithm = fields[0];
            r.policy = fields[1];
            r.seed = std::stoull(fields[2]);
            r.optional_utilization_threshold = std::stod(fields[3]);
            r.optional_percentage = std::stod(fields[4]);
            r.connected_percentage = std::stod(fields[5]);
            r.discount = std::stod(fields[6]);
            r.pattern = fields[7];
            r.alpha = std::stod(fields[8]);
            r.hosts = std::stoi(fields[9]);
            r.vms = std::stoi(fields[10]);
            r.horizon = std::stoi(fields[11]);
            r.energy_kwh = std::stod(fields[12]);
            r.discount_fraction = std::stod(fields[13]);
            r.disabled_utilization = std::stod(fields[14]);
            r.mean_shutdown_hosts = std::stod(fields[15]);
            r.migrations = std::stol(fields[16]);
            r.deactivations = std::stol(fields[17]);
            rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header_seen) {
        throw ParseError(path.string() + ": missing results header");
    }
    return rows;
}

void write_series_csv(const std::filesystem::path& path, const SimulationReport& report) {
    auto out = open_out(path);
    out << kSeriesSchema << "\n"
        << "t,total_power_w,energy_kwh,overloaded,overloaded_after_brownout,migrations,deactivations,"
           "active_hosts,off_hosts,discount_sum,disabled_utilization\n";
    for (const auto& s : report.series) {
        out << s.t << ',' << format_double(s.total_power_w) << ',' << format_double(s.energy_kwh) << ','
            << s.overloaded_count << ',' << s.overloaded_after_brownout << ',' << s.migrations << ','
            << s.deactivation_events << ',' << s.active_hosts << ',' << s.off_hosts << ','
            << format_double(s.discount_sum) << ',' << format_double(s.disabled_utilization) << "\n";
    }
}

void write_summary_json(const std::filesystem::path& path, std::span<const SimulationReport> reports) {
    if (reports.empty()) {
        throw IoError("summary: no reports to write");
    }
    ordered_json j;
    j["schema"] = "brownsim.summary.v1";
    ordered_json runs = ordered_json::array();
    std::vector<double> energies;
    std::vector<double> discounts;
    for (const auto& r : reports) {
        ordered_json e;
        e["algorithm"] = r.algorithm;
        e["policy"] = r.policy;
        e["seed"] = r.seed;
        e["hosts"] = r.host_count;
        e["vms"] = r.vm_count;
        e["horizon"] = r.horizon;
        e["energy_kwh"] = r.total_energy_kwh;
        e["discount_fraction"] = r.discount_fraction;
        e["disabled_utilization"] = r.disabled_utilization_total;
        e["mean_shutdown_hosts"] = r.mean_shutdown_hosts;
        e["migrations"] = r.migration_count;
        e["deactivations"] = r.deactivation_events;
        ordered_json cost;
        cost["t_b_seconds"] = r.cost.t_b_seconds;
        cost["t_m_seconds"] = r.cost.t_m_seconds;
        cost["t_0_seconds"] = r.cost.t_0_seconds;
        cost["max_overloaded"] = r.cost.max_overloaded;
        cost["homogeneous"] = r.cost.homogeneous;
        const auto config_echo = ordered_json::parse(r.config_echo_json);
        if (r.cost.homogeneous && r.cost.t_b_seconds + r.cost.t_m_seconds > 0.0) {
            const double epsilon = config_echo.at("epsilon").get<double>();
            const auto [ratio, bound] = empirical_cost_ratio(r.cost, r.host_count, r.vm_count, epsilon);
            cost["ratio"] = ratio;
            cost["ratio_bound"] = bound;
        }
        e["cost"] = std::move(cost);
        e["config"] = config_echo;
        runs.push_back(std::move(e));
        energies.push_back(r.total_energy_kwh);
        discounts.push_back(r.discount_fraction);
    }
    j["runs"] = std::move(runs);
    if (reports.size() > 1) {
        const auto [e_lo, e_hi] = confidence_interval_95(energies);
        const auto [d_lo, d_hi] = confidence_interval_95(discounts);
        ordered_json agg;
        agg["count"] = reports.size();
        agg["energy_kwh_mean"] = mean(energies);
        agg["energy_kwh_ci95"] = {e_lo, e_hi};
        agg["discount_fraction_mean"] = mean(discounts);
        agg["discount_fraction_ci95"] = {d_lo, d_hi};
        j["aggregate"] = std::move(agg);
    }
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace brownsim
