#include "brownsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>

#include "brownsim/errors.hpp"

namespace brownsim {

namespace {

// Population stddev; the pattern rule is a spread bound, not an estimator.
double population_stddev(const std::vector<double>& xs) {
    if (xs.empty()) {
        return 0.0;
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (const double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

// Truncated-at-zero normal draws rescaled to sum exactly to total.
bool draw_renormalized(Rng& rng, int n, double mean, double sigma, double total, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& x : out) {
        x = std::max(0.0, normal(rng, mean, sigma));
        sum += x;
    }
    if (total == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return true;
    }
    if (sum <= 0.0) {
        return false;
    }
    const double scale = total / sum;
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        out[i] *= scale;
        partial += out[i];
    }
    out.back() = total - partial;
    return out.back() >= -1e-12;
}

}  // namespace

double ComponentGenConfig::resolved_discount_total() const {
    return discount_total.value_or(optional_utilization_threshold);
}

double ComponentGenConfig::resolved_sigma() const {
    if (sigma) {
        return *sigma;
    }
    return pattern == ComponentPattern::Approximate ? 0.03 : 0.2;
}

void ComponentGenConfig::validate() const {
    auto fraction = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(std::string("component generation: ") + what + " outside [0, 1]");
        }
    };
    fraction(optional_utilization_threshold, "optional_utilization_threshold");
    fraction(optional_percentage, "optional_percentage");
    fraction(connected_percentage, "connected_percentage");
    fraction(resolved_discount_total(), "discount");
    if (component_count < 1) {
        throw ConfigError("component generation: component_count must be >= 1");
    }
    if (resolved_sigma() < 0.0) {
        throw ConfigError("component generation: sigma must be >= 0");
    }
    const int optional_count = static_cast<int>(std::ceil(optional_percentage * component_count));
    if (optional_count == 0 && (optional_utilization_threshold > 0.0 || resolved_discount_total() > 0.0)) {
        throw ConfigError("component generation: no optional components but a positive optional threshold/discount");
    }
    if (optional_count == component_count && optional_utilization_threshold < 1.0 - 1e-12) {
        throw ConfigError(
            "component generation: all components optional requires optional_utilization_threshold = 1");
    }
    if (pattern == ComponentPattern::Different && optional_count > 0) {
        // n non-negative values summing to S spread at most S*sqrt(n-1)/n;
        // if neither utilization nor discount can reach the 0.1 bound the
        // pattern is unrealizable no matter how many redraws happen.
        const auto max_spread = [optional_count](double total) {
            return total * std::sqrt(static_cast<double>(optional_count - 1)) / optional_count;
        };
        if (max_spread(optional_utilization_threshold) < 0.1 && max_spread(resolved_discount_total()) < 0.1) {
            throw ConfigError(
                "component generation: the different pattern is unrealizable (maximum utilization/discount "
                "stddev below 0.1 for this threshold and optional count)");
        }
    }
}

ApplicationSpec generate_application(const ComponentGenConfig& cfg, Rng& rng) {
    cfg.validate();
    const int count = cfg.component_count;
    const int optional_count = std::min(count, static_cast<int>(std::ceil(cfg.optional_percentage * count)));
    const int mandatory_count = count - optional_count;
    const double threshold = cfg.optional_utilization_threshold;
    const double discount_total = cfg.resolved_discount_total();
    const double sigma = cfg.resolved_sigma();

    std::vector<double> opt_util;
    std::vector<double> opt_disc;
    bool pattern_ok = false;
    for (int attempt = 0; attempt < cfg.max_retries && !pattern_ok; ++attempt) {
        const double mean_u = optional_count > 0 ? threshold / optional_count : 0.0;
        const double mean_d = optional_count > 0 ? discount_total / optional_count : 0.0;
        if (optional_count > 0) {
            if (!draw_renormalized(rng, optional_count, mean_u, sigma, threshold, opt_util) ||
                !draw_renormalized(rng, optional_count, mean_d, sigma, discount_total, opt_disc)) {
                continue;
            }
        }
        const double su = population_stddev(opt_util);
        const double sd = population_stddev(opt_disc);
        pattern_ok = cfg.pattern == ComponentPattern::Approximate ? (su < 0.1 && sd < 0.1)
                                                                  : (su >= 0.1 || sd >= 0.1);
    }
    if (!pattern_ok) {
        throw ConfigError(std::string("component generation: could not realize the ") +
                          (cfg.pattern == ComponentPattern::Approximate ? "approximate" : "different") +
                          " pattern (stddev bound 0.1) within " + std::to_string(cfg.max_retries) + " retries");
    }

    ApplicationSpec app;
    app.components.reserve(static_cast<std::size_t>(count));
    const double mand_util = mandatory_count > 0 ? (1.0 - threshold) / mandatory_count : 0.0;
    const double mand_disc = mandatory_count > 0 ? std::max(0.0, 1.0 - discount_total) / mandatory_count : 0.0;
    for (int i = 0; i < mandatory_count; ++i) {
        app.components.push_back({i, ComponentKind::Mandatory, mand_util, mand_disc, std::nullopt});
    }
    for (int i = 0; i < optional_count; ++i) {
        app.components.push_back({mandatory_count + i, ComponentKind::Optional,
                                  std::clamp(opt_util[static_cast<std::size_t>(i)], 0.0, 1.0),
                                  std::clamp(opt_disc[static_cast<std::size_t>(i)], 0.0, 1.0), std::nullopt});
    }

    // Connection groups: pairs over a random subset, with a final group of
    // three when the subset size is odd. A lone tagged component would form
    // no group, so fewer than two tags means no connections.
    const int tagged = static_cast<int>(std::ceil(cfg.connected_percentage * count));
    if (tagged >= 2) {
        std::vector<int> indices(static_cast<std::size_t>(count));
        std::iota(indices.begin(), indices.end(), 0);
        for (int i = 0; i < tagged; ++i) {
            const int j = i + static_cast<int>(uniform01(rng) * static_cast<double>(count - i));
            std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(std::min(j, count - 1))]);
        }
        int tag = 0;
        int i = 0;
        while (i < tagged) {
            const int group = (tagged - i == 3) ? 3 : 2;
            for (int k = 0; k < group; ++k) {
                app.components[static_cast<std::size_t>(indices[static_cast<std::size_t>(i + k)])].connection_tag = tag;
            }
            i += group;
            ++tag;
        }
    }

    app.validate();
    return app;
}

void TraceSource::validate() const {
    switch (kind) {
        case Kind::PlanetLabFiles:
            if (trace_dir.empty()) {
                throw ConfigError("trace source: planetlab kind requires trace_dir");
            }
            break;
        case Kind::Constant:
            if (!(constant_level >= 0.0 && constant_level <= 1.0)) {
                throw ConfigError("trace source: constant level outside [0, 1]");
            }
            break;
        case Kind::RandomWalk:
            if (!(walk_min >= 0.0 && walk_max <= 1.0 && walk_min <= walk_max)) {
                throw ConfigError("trace source: walk bounds must satisfy 0 <= min <= max <= 1");
            }
            if (!(walk_start >= walk_min && walk_start <= walk_max)) {
                throw ConfigError("trace source: walk start outside [min, max]");
            }
            if (walk_step < 0.0) {
                throw ConfigError("trace source: walk step must be >= 0");
            }
            break;
    }
}

std::vector<double> load_planetlab_trace(const std::filesystem::path& path, int target_len, std::ostream* diag) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace file: " + path.string());
    }
    std::vector<double> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        int value = 0;
        try {
            std::size_t pos = 0;
            value = std::stoi(line, &pos);
            if (pos != line.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected an integer, got '" + line +
                             "'");
        }
        if (value < 0 || value > 100) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": CPU percentage " +
                             std::to_string(value) + " outside 0-100");
        }
        samples.push_back(value / 100.0);
    }
    if (samples.empty()) {
        throw ParseError(path.string() + ": empty trace file");
    }
    if (static_cast<int>(samples.size()) != target_len && diag != nullptr) {
        *diag << path.string() << ": " << samples.size() << " samples, adjusting to " << target_len << "\n";
    }
    if (static_cast<int>(samples.size()) > target_len) {
        samples.resize(static_cast<std::size_t>(target_len));
    }
    while (static_cast<int>(samples.size()) < target_len) {
        samples.push_back(samples.back());
    }
    return samples;
}

std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("trace directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw IoError("trace directory is empty: " + dir.string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

double synthetic_demand(const TraceSource& source, Rng& rng, double previous) {
    switch (source.kind) {
        case TraceSource::Kind::Constant:
            return source.constant_level;
        case TraceSource::Kind::RandomWalk: {
            const double step = (2.0 * uniform01(rng) - 1.0) * source.walk_step;
            return std::clamp(previous + step, source.walk_min, source.walk_max);
        }
        case TraceSource::Kind::PlanetLabFiles:
            throw ConfigError("synthetic_demand: planetlab traces are file-backed");
    }
    throw ConfigError("synthetic_demand: unknown trace kind");
}

std::vector<double> make_demand_series(const TraceSource& source, std::uint64_t seed, int vm_index, int horizon,
                                       std::ostream* diag) {
    if (horizon < 1) {
        throw ConfigError("demand series: horizon must be >= 1");
    }
    source.validate();
    if (source.kind == TraceSource::Kind::PlanetLabFiles) {
        const auto files = list_trace_files(source.trace_dir);
        const auto& file = files[static_cast<std::size_t>(vm_index) % files.size()];
        return load_planetlab_trace(file, horizon, diag);
    }
    Rng rng(derive_seed(seed, /*stream=*/0x7261636bULL, static_cast<std::uint64_t>(vm_index)));
    std::vector<double> series(static_cast<std::size_t>(horizon));
    double level = source.kind == TraceSource::Kind::Constant ? source.constant_level : source.walk_start;
    for (auto& sample : series) {
        sample = level;
        level = synthetic_demand(source, rng, level);
    }
    return series;
}

}  // namespace brownsim
