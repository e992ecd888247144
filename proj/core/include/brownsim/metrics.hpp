#ifndef BROWNSIM_METRICS_HPP
#define BROWNSIM_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "brownsim/brownout.hpp"

namespace brownsim {

// One simulated interval's measurements, sampled after consolidation.
struct IntervalSample {
    int t = 0;
    std::vector<double> host_power_w;  // per host, Off hosts included
    double total_power_w = 0.0;
    double energy_kwh = 0.0;
    int overloaded_count = 0;        // at the brownout decision point
    int overloaded_after_brownout = 0;
    int migrations = 0;
    std::vector<DeactivationRecord> deactivations;
    int deactivation_events = 0;
    int active_hosts = 0;
    int off_hosts = 0;
    double discount_sum = 0.0;            // sum over VMs of current deactivated discount
    double disabled_utilization = 0.0;    // sum over VMs of requested x disabled fraction
};

// Wall-phase time split for the cost-ratio bound: intervals where only
// brownout ran contribute their full length to t_b, migration-only to t_m,
// both to each at half length, neither to t_0.
struct CostAccounting {
    double t_b_seconds = 0.0;
    double t_m_seconds = 0.0;
    double t_0_seconds = 0.0;
    double overload_seconds_brownout = 0.0;   // sum of t_b,i x overloaded(i)
    double overload_seconds_migration = 0.0;  // sum of t_m,i x overloaded-after-brownout(i)
    int max_overloaded = 0;
    bool homogeneous = false;
};

struct SimulationReport {
    std::string algorithm;  // pco | ubp | eeba
    std::string policy;     // selection policy for eeba, empty otherwise
    std::uint64_t seed = 0;
    int host_count = 0;
    int vm_count = 0;
    int horizon = 0;
    double interval_seconds = 0.0;
    double total_energy_kwh = 0.0;
    double discount_fraction = 0.0;  // mean per-VM per-interval refunded fraction
    double disabled_utilization_total = 0.0;
    double mean_shutdown_hosts = 0.0;
    long migration_count = 0;
    long deactivation_events = 0;
    CostAccounting cost;
    std::vector<IntervalSample> series;
    std::string config_echo_json;  // the exact resolved run configuration
};

// E_pa / E_b + alpha x D_pa; lower is better.
double efficiency(double energy_kwh, double baseline_energy_kwh, double discount_fraction, double alpha);

// Mean per-VM per-interval deactivated discount, in [0, 1].
double discount_fraction(const std::vector<IntervalSample>& series, int vm_count);

// Empirical cost of the run against the keep-everything-in-place baseline,
// with energy cost 1 and overload cost epsilon per host-second, plus the
// 1 + N eps / (N + M) ceiling. Requires a homogeneous fleet and a non-zero
// brownout/migration phase.
std::pair<double, double> empirical_cost_ratio(const CostAccounting& cost, int total_hosts, int total_vms,
                                               double epsilon);

// Recomputes every aggregate from the series; returns an empty string when
// all match within tol, else the first mismatch.
std::string check_report_consistency(const SimulationReport& report, double tol = 1e-9);

}  // namespace brownsim

#endif
