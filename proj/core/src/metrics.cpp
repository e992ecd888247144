#include "brownsim/metrics.hpp"

#include <cmath>

#include "brownsim/errors.hpp"

namespace brownsim {

double efficiency(double energy_kwh, double baseline_energy_kwh, double discount_fraction, double alpha) {
    if (!(baseline_energy_kwh > 0.0)) {
        throw DomainError("efficiency: baseline energy must be > 0");
    }
    if (!(discount_fraction >= 0.0 && discount_fraction <= 1.0)) {
        throw DomainError("efficiency: discount fraction outside [0, 1]");
    }
    if (alpha < 0.0) {
        throw DomainError("efficiency: alpha must be >= 0");
    }
    return energy_kwh / baseline_energy_kwh + alpha * discount_fraction;
}

double discount_fraction(const std::vector<IntervalSample>& series, int vm_count) {
    if (vm_count <= 0 || series.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& sample : series) {
        sum += sample.discount_sum;
    }
    return sum / (static_cast<double>(vm_count) * static_cast<double>(series.size()));
}

std::pair<double, double> empirical_cost_ratio(const CostAccounting& cost, int total_hosts, int total_vms,
                                               double epsilon) {
    if (total_hosts <= 0 || total_vms <= 0) {
        throw DomainError("empirical_cost_ratio: need M > 0 and N > 0");
    }
    if (epsilon < 0.0) {
        throw DomainError("empirical_cost_ratio: epsilon must be >= 0");
    }
    if (!cost.homogeneous) {
        throw DomainError("empirical_cost_ratio: the bound assumes homogeneous hosts and VMs");
    }
    const double m = static_cast<double>(total_hosts);
    const double n = static_cast<double>(total_vms);
    const double opt = (cost.t_b_seconds + cost.t_m_seconds) * m;
    if (opt <= 0.0) {
        throw DomainError("empirical_cost_ratio: no brownout or migration phase occurred (OPT = 0)");
    }
    const double run_cost = opt + epsilon * (cost.overload_seconds_brownout + cost.overload_seconds_migration);
    const double bound = 1.0 + n * epsilon / (n + m);
    return {run_cost / opt, bound};
}

std::string check_report_consistency(const SimulationReport& report, double tol) {
    if (static_cast<int>(report.series.size()) != report.horizon) {
        return "series length " + std::to_string(report.series.size()) + " != horizon " +
               std::to_string(report.horizon);
    }
    double energy = 0.0;
    double disabled = 0.0;
    double off_hosts = 0.0;
    long migrations = 0;
    long deactivations = 0;
    for (const auto& s : report.series) {
        energy += s.energy_kwh;
        disabled += s.disabled_utilization;
        off_hosts += s.off_hosts;
        migrations += s.migrations;
        deactivations += s.deactivation_events;
        if (static_cast<int>(s.deactivations.size()) != s.deactivation_events) {
            return "interval " + std::to_string(s.t) + ": deactivation records out of step with the count";
        }
        if (!s.host_power_w.empty()) {
            double total = 0.0;
            for (const double p : s.host_power_w) {
                total += p;
            }
            if (std::abs(total - s.total_power_w) > tol) {
                return "interval " + std::to_string(s.t) + ": per-host power does not sum to the total";
            }
        }
    }
    if (std::abs(energy - report.total_energy_kwh) > tol) {
        return "energy aggregate drift: " + std::to_string(energy - report.total_energy_kwh);
    }
    if (std::abs(disabled - report.disabled_utilization_total) > tol) {
        return "disabled utilization drift";
    }
    if (!report.series.empty() &&
        std::abs(off_hosts / static_cast<double>(report.series.size()) - report.mean_shutdown_hosts) > tol) {
        return "mean shutdown hosts drift";
    }
    if (migrations != report.migration_count) {
        return "migration count mismatch";
    }
    if (deactivations != report.deactivation_events) {
        return "deactivation count mismatch";
    }
    if (std::abs(discount_fraction(report.series, report.vm_count) - report.discount_fraction) > tol) {
        return "discount fraction drift";
    }
    return {};
}

}  // namespace brownsim
