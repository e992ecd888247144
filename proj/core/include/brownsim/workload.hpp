#ifndef BROWNSIM_WORKLOAD_HPP
#define BROWNSIM_WORKLOAD_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "brownsim/domain.hpp"
#include "brownsim/rng.hpp"

namespace brownsim {

// Components with near-uniform utilization/discount (both stddevs < 0.1)
// versus conspicuously different ones (at least one stddev >= 0.1).
enum class ComponentPattern { Approximate, Different };

struct ComponentGenConfig {
    double optional_utilization_threshold = 0.5;
    double optional_percentage = 0.5;
    double connected_percentage = 0.25;
    std::optional<double> discount_total;  // defaults to the utilization threshold
    int component_count = 8;
    ComponentPattern pattern = ComponentPattern::Different;
    std::optional<double> sigma;  // normal-draw stddev; default by pattern
    int max_retries = 1000;

    double resolved_discount_total() const;
    double resolved_sigma() const;
    void validate() const;
};

// Draws one application: optional components get normal utilizations and
// discounts renormalized to exact configured sums, mandatory components
// share the remainder uniformly, and connection tags pair up a random
// subset. Redraws until the realized stddevs match the requested pattern.
ApplicationSpec generate_application(const ComponentGenConfig& cfg, Rng& rng);

struct TraceSource {
    enum class Kind { PlanetLabFiles, RandomWalk, Constant };

    Kind kind = Kind::RandomWalk;
    std::filesystem::path trace_dir;  // PlanetLabFiles
    double constant_level = 0.85;
    double walk_start = 0.75;
    double walk_step = 0.05;
    double walk_min = 0.0;
    double walk_max = 1.0;

    void validate() const;
};

// Reads one PlanetLab-style day file: one integer CPU percentage (0-100)
// per line. Short files hold the last value, long ones are truncated; any
// length adjustment is reported on diag.
std::vector<double> load_planetlab_trace(const std::filesystem::path& path, int target_len = 288,
                                         std::ostream* diag = nullptr);

// Sorted list of trace files in a directory (assigned to VMs round-robin).
std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path& dir);

// One synthetic step: the next demand sample given the previous one.
double synthetic_demand(const TraceSource& source, Rng& rng, double previous);

// Full per-VM demand series, deterministic in (source, seed, vm_index).
std::vector<double> make_demand_series(const TraceSource& source, std::uint64_t seed, int vm_index, int horizon,
                                       std::ostream* diag = nullptr);

}  // namespace brownsim

#endif
