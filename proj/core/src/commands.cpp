#include "brownsim/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>
#include <vector>

#include "brownsim/errors.hpp"
#include "brownsim/report_io.hpp"
#include "brownsim/simulator.hpp"
#include "brownsim/stats.hpp"

namespace brownsim {

namespace {

enum class OutputFormat { Csv, Summary, Both };

OutputFormat parse_format(const std::optional<std::string>& format) {
    if (!format) {
        return OutputFormat::Both;
    }
    if (*format == "csv") {
        return OutputFormat::Csv;
    }
    if (*format == "summary") {
        return OutputFormat::Summary;
    }
    throw ConfigError("unknown format '" + *format + "' (expected csv|summary)");
}

void apply_overrides(RunConfig& cfg, const CliOverrides& overrides) {
    if (overrides.seed) {
        cfg.seed = *overrides.seed;
    }
    if (overrides.algorithm) {
        const auto [algorithm, policy] = parse_algorithm_spec(*overrides.algorithm);
        cfg.algorithm = algorithm;
        if (overrides.algorithm->find(':') != std::string::npos) {
            cfg.policy = policy;
        }
    }
    if (overrides.policy) {
        cfg.policy = selection_policy_from_string(*overrides.policy);
    }
    if (overrides.trace_dir) {
        cfg.trace.kind = TraceSource::Kind::PlanetLabFiles;
        cfg.trace.trace_dir = *overrides.trace_dir;
    }
}

double efficiency_of(const SimulationReport& report, double baseline_energy, double alpha) {
    return efficiency(report.total_energy_kwh, baseline_energy, report.discount_fraction, alpha);
}

// One sweep cell job: a fully resolved run configuration.
struct SweepJob {
    RunConfig config;
    bool baseline = false;
};

std::vector<SweepJob> expand_sweep(const SweepSpec& spec) {
    std::vector<SweepJob> jobs;
    std::vector<std::pair<Algorithm, SelectionPolicy>> eeba_specs;
    std::vector<Algorithm> baseline_algorithms;
    for (const auto& name : spec.algorithms) {
        const auto parsed = parse_algorithm_spec(name);
        if (parsed.first == Algorithm::Eeba) {
            eeba_specs.push_back(parsed);
        } else {
            baseline_algorithms.push_back(parsed.first);
        }
    }

    // Baselines ignore the component grid; one run per algorithm and seed.
    for (const auto algorithm : baseline_algorithms) {
        for (const auto seed : spec.seeds) {
            SweepJob job;
            job.config = spec.base;
            job.config.algorithm = algorithm;
            job.config.seed = seed;
            job.baseline = true;
            jobs.push_back(std::move(job));
        }
    }
    for (const double threshold : spec.optional_utilization_thresholds) {
        const std::vector<double> discounts = spec.discounts ? *spec.discounts : std::vector<double>{threshold};
        for (const double optional_pct : spec.optional_percentages) {
            for (const double connected_pct : spec.connected_percentages) {
                for (const double discount : discounts) {
                    for (const auto& [algorithm, policy] : eeba_specs) {
                        for (const auto seed : spec.seeds) {
                            SweepJob job;
                            job.config = spec.base;
                            job.config.algorithm = algorithm;
                            job.config.policy = policy;
                            job.config.seed = seed;
                            job.config.components.optional_utilization_threshold = threshold;
                            job.config.components.optional_percentage = optional_pct;
                            job.config.components.connected_percentage = connected_pct;
                            job.config.components.discount_total = discount;
                            jobs.push_back(std::move(job));
                        }
                    }
                }
            }
        }
    }
    return jobs;
}

struct CellKey {
    double threshold;
    double optional_pct;
    double connected_pct;
    double discount;
    std::string pattern;

    auto tie() const { return std::tie(threshold, optional_pct, connected_pct, discount, pattern); }
    bool operator<(const CellKey& other) const { return tie() < other.tie(); }
};

std::string cell_to_string(const CellKey& cell) {
    return "threshold=" + format_double(cell.threshold) + " optional=" + format_double(cell.optional_pct) +
           " connected=" + format_double(cell.connected_pct) + " discount=" + format_double(cell.discount) +
           " pattern=" + cell.pattern;
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const CliOverrides& overrides, std::ostream& out,
            std::ostream& err) {
    const auto format = parse_format(overrides.format);
    RunConfig cfg = RunConfig::load(config_path);
    apply_overrides(cfg, overrides);
    cfg.validate();

    const auto out_dir = overrides.out_dir.value_or(std::filesystem::path("out"));
    const SimulationReport report = run(cfg, &err);

    const auto consistency = check_report_consistency(report);
    if (!consistency.empty()) {
        throw Error("report self-check failed: " + consistency);
    }

    if (format != OutputFormat::Summary) {
        const ResultRow row = to_result_row(report);
        write_results_csv(out_dir / "run.csv", std::span(&row, 1));
        write_series_csv(out_dir / "series.csv", report);
    }
    if (format != OutputFormat::Csv) {
        write_summary_json(out_dir / "summary.json", std::span(&report, 1));
    }

    const double baseline = cfg.baseline_energy_kwh.value_or(report.total_energy_kwh);
    out << "algorithm=" << report.algorithm << (report.policy.empty() ? "" : ":" + report.policy)
        << " seed=" << report.seed << " energy_kwh=" << format_double(report.total_energy_kwh)
        << " discount=" << format_double(report.discount_fraction)
        << " eff=" << format_double(efficiency_of(report, baseline, cfg.alpha)) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::filesystem::path& sweep_path, const CliOverrides& overrides, std::ostream& out,
              std::ostream& err) {
    const auto format = parse_format(overrides.format);
    SweepSpec spec = SweepSpec::load(sweep_path);
    apply_overrides(spec.base, overrides);
    if (overrides.seed) {
        spec.seeds = {*overrides.seed};
    }
    if (overrides.jobs) {
        spec.jobs = *overrides.jobs;
    }
    spec.validate();

    const auto out_dir = overrides.out_dir.value_or(std::filesystem::path("sweep-out"));
    const auto jobs = expand_sweep(spec);

    std::vector<SimulationReport> reports(jobs.size());
    std::vector<std::string> failures(jobs.size());
    std::atomic<std::size_t> next{0};
    const int worker_count = std::max(1, std::min<int>(spec.jobs, static_cast<int>(jobs.size())));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            try {
                reports[i] = run(jobs[i].config);
                const auto consistency = check_report_consistency(reports[i]);
                if (!consistency.empty()) {
                    throw Error("report self-check failed: " + consistency);
                }
                // Only aggregates feed the sweep outputs; drop the series
                // to keep large grids in bounded memory.
                reports[i].series.clear();
                reports[i].series.shrink_to_fit();
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int i = 0; i < worker_count; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }

    std::vector<ResultRow> rows;
    std::vector<SimulationReport> ok_reports;
    int failed = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!failures[i].empty()) {
            ++failed;
            const auto& c = jobs[i].config.components;
            err << "sweep cell failed: algorithm=" << to_string(jobs[i].config.algorithm)
                << " seed=" << jobs[i].config.seed << " threshold=" << format_double(c.optional_utilization_threshold)
                << " optional=" << format_double(c.optional_percentage)
                << " connected=" << format_double(c.connected_percentage) << ": " << failures[i] << "\n";
            continue;
        }
        rows.push_back(to_result_row(reports[i]));
        ok_reports.push_back(std::move(reports[i]));
    }

    if (format != OutputFormat::Summary) {
        write_results_csv(out_dir / "results.csv", rows);

        // Per (cell, algorithm) aggregate with CIs across seeds.
        std::map<std::pair<CellKey, std::string>, std::vector<const ResultRow*>> groups;
        for (const auto& row : rows) {
            const CellKey cell{row.optional_utilization_threshold, row.optional_percentage,
                               row.connected_percentage, row.discount, row.pattern};
            const std::string algo = row.algorithm + (row.policy.empty() ? "" : ":" + row.policy);
            groups[{cell, algo}].push_back(&row);
        }
        std::ofstream agg_out(out_dir / "aggregate.csv", std::ios::binary);
        agg_out << "# brownsim.aggregate.v1\n"
                << "optional_utilization_threshold,optional_percentage,connected_percentage,discount,pattern,"
                   "algorithm,seeds,energy_kwh_mean,energy_kwh_ci_lo,energy_kwh_ci_hi,discount_mean,"
                   "discount_ci_lo,discount_ci_hi,disabled_utilization_mean,mean_shutdown_hosts\n";
        for (const auto& [key, members] : groups) {
            std::vector<double> energy;
            std::vector<double> discount;
            std::vector<double> disabled;
            std::vector<double> shutdown;
            for (const auto* row : members) {
                energy.push_back(row->energy_kwh);
                discount.push_back(row->discount_fraction);
                disabled.push_back(row->disabled_utilization);
                shutdown.push_back(row->mean_shutdown_hosts);
            }
            double e_lo = energy.front();
            double e_hi = energy.front();
            double d_lo = discount.front();
            double d_hi = discount.front();
            if (energy.size() > 1) {
                std::tie(e_lo, e_hi) = confidence_interval_95(energy);
                std::tie(d_lo, d_hi) = confidence_interval_95(discount);
            }
            agg_out << format_double(key.first.threshold) << ',' << format_double(key.first.optional_pct) << ','
                    << format_double(key.first.connected_pct) << ',' << format_double(key.first.discount) << ','
                    << key.first.pattern << ',' << key.second << ',' << energy.size() << ','
                    << format_double(mean(energy)) << ',' << format_double(e_lo) << ',' << format_double(e_hi) << ','
                    << format_double(mean(discount)) << ',' << format_double(d_lo) << ',' << format_double(d_hi)
                    << ',' << format_double(mean(disabled)) << ',' << format_double(mean(shutdown)) << "\n";
        }
    }
    if (format != OutputFormat::Csv && !ok_reports.empty()) {
        write_summary_json(out_dir / "summary.json", ok_reports);
    }

    out << "sweep: " << rows.size() << " runs completed, " << failed << " failed, results in " << out_dir.string()
        << "\n";
    return failed > 0 ? kExitPartialSweep : kExitOk;
}

int cmd_compare(const std::filesystem::path& report_dir, const CliOverrides& overrides, std::ostream& out,
                std::ostream& err) {
    (void)overrides;
    const auto rows = read_results_csv(report_dir / "results.csv");
    if (rows.empty()) {
        throw ConfigError("compare: no result rows in " + (report_dir / "results.csv").string());
    }

    // Per-seed baseline energy; the efficiency denominator pairs each run
    // with the baseline run of the same seed.
    std::map<std::uint64_t, double> pco_energy;
    for (const auto& row : rows) {
        if (row.algorithm == "pco") {
            pco_energy[row.seed] = row.energy_kwh;
        }
    }
    if (pco_energy.empty()) {
        throw ConfigError("compare: results contain no pco baseline runs");
    }

    std::set<std::string> policies;
    std::set<std::uint64_t> seeds;
    for (const auto& row : rows) {
        if (row.algorithm == "eeba") {
            policies.insert(row.policy);
            seeds.insert(row.seed);
        }
    }
    if (policies.empty()) {
        throw ConfigError("compare: results contain no eeba runs");
    }

    std::map<CellKey, std::map<std::string, std::vector<std::pair<std::uint64_t, double>>>> cells;
    for (const auto& row : rows) {
        if (row.algorithm != "eeba") {
            continue;
        }
        const auto base_it = pco_energy.find(row.seed);
        if (base_it == pco_energy.end()) {
            err << "compare: no pco baseline for seed " << row.seed << ", skipping a row\n";
            continue;
        }
        const double eff = row.energy_kwh / base_it->second + row.alpha * row.discount_fraction;
        const CellKey cell{row.optional_utilization_threshold, row.optional_percentage, row.connected_percentage,
                           row.discount, row.pattern};
        cells[cell][row.policy].emplace_back(row.seed, eff);
    }

    const auto out_path = report_dir / "recommendations.csv";
    std::ofstream rec(out_path, std::ios::binary);
    rec << "# brownsim.recommendations.v1\n"
        << "optional_utilization_threshold,optional_percentage,connected_percentage,discount,pattern,"
           "recommended_policy,eff_mean,eff_ci_lo,eff_ci_hi\n";

    int incomplete = 0;
    for (const auto& [cell, by_policy] : cells) {
        bool complete = by_policy.size() == policies.size();
        for (const auto& [policy, samples] : by_policy) {
            if (samples.size() != seeds.size()) {
                complete = false;
            }
        }
        if (!complete) {
            ++incomplete;
            err << "compare: incomplete cell excluded: " << cell_to_string(cell) << "\n";
            continue;
        }
        std::string best_policy;
        double best_mean = 0.0;
        std::pair<double, double> best_ci{0.0, 0.0};
        for (const auto& [policy, samples] : by_policy) {
            std::vector<double> effs;
            for (const auto& [seed, eff] : samples) {
                effs.push_back(eff);
            }
            const double m = mean(effs);
            const auto ci = effs.size() > 1 ? confidence_interval_95(effs) : std::make_pair(m, m);
            if (best_policy.empty() || m < best_mean) {
                best_policy = policy;
                best_mean = m;
                best_ci = ci;
            }
        }
        rec << format_double(cell.threshold) << ',' << format_double(cell.optional_pct) << ','
            << format_double(cell.connected_pct) << ',' << format_double(cell.discount) << ',' << cell.pattern << ','
            << best_policy << ',' << format_double(best_mean) << ',' << format_double(best_ci.first) << ','
            << format_double(best_ci.second) << "\n";
        out << cell_to_string(cell) << " -> " << best_policy << " (eff " << format_double(best_mean) << ", 95% CI ["
            << format_double(best_ci.first) << ", " << format_double(best_ci.second) << "])\n";
    }
    if (incomplete > 0) {
        out << incomplete << " incomplete cell(s) excluded\n";
    }
    out << "recommendations written to " << out_path.string() << "\n";
    return kExitOk;
}

}  // namespace brownsim
