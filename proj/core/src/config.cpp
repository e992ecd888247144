#include "brownsim/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "brownsim/errors.hpp"

namespace brownsim {

using ordered_json = nlohmann::ordered_json;

namespace {

ComponentPattern pattern_from_string(const std::string& name) {
    if (name == "approximate") return ComponentPattern::Approximate;
    if (name == "different") return ComponentPattern::Different;
    throw ConfigError("unknown component pattern '" + name + "' (expected approximate|different)");
}

std::string to_string(ComponentPattern pattern) {
    return pattern == ComponentPattern::Approximate ? "approximate" : "different";
}

TraceSource::Kind trace_kind_from_string(const std::string& name) {
    if (name == "planetlab") return TraceSource::Kind::PlanetLabFiles;
    if (name == "random_walk") return TraceSource::Kind::RandomWalk;
    if (name == "constant") return TraceSource::Kind::Constant;
    throw ConfigError("unknown trace kind '" + name + "' (expected planetlab|random_walk|constant)");
}

std::string to_string(TraceSource::Kind kind) {
    switch (kind) {
        case TraceSource::Kind::PlanetLabFiles: return "planetlab";
        case TraceSource::Kind::RandomWalk: return "random_walk";
        case TraceSource::Kind::Constant: return "constant";
    }
    return "?";
}

ordered_json parse_json(const std::string& text, const char* what) {
    try {
        return ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json(text, path.string().c_str());
}

template <typename T>
void read_to(const ordered_json& j, const char* key, T& out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

RunConfig run_config_from_json(const ordered_json& j) {
    RunConfig cfg;
    read_to(j, "hosts_per_type", cfg.hosts_per_type);
    read_to(j, "vms_per_type", cfg.vms_per_type);
    read_to(j, "horizon_intervals", cfg.horizon_intervals);
    read_to(j, "interval_seconds", cfg.interval_seconds);

    if (j.contains("algorithm")) {
        cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    }
    if (j.contains("policy")) {
        cfg.policy = selection_policy_from_string(j.at("policy").get<std::string>());
    }
    read_to(j, "upper_threshold", cfg.thresholds.upper);
    read_to(j, "lower_threshold", cfg.thresholds.lower);
    read_to(j, "lambda", cfg.thresholds.lambda);
    read_to(j, "power_threshold", cfg.power_threshold);
    if (j.contains("ubp_formula")) {
        const auto name = j.at("ubp_formula").get<std::string>();
        if (name == "corrected") {
            cfg.ubp_formula = UbpFormula::Corrected;
        } else if (name == "as_printed") {
            cfg.ubp_formula = UbpFormula::AsPrinted;
        } else {
            throw ConfigError("unknown ubp_formula '" + name + "' (expected corrected|as_printed)");
        }
    }
    if (j.contains("sleep_power")) {
        const auto name = j.at("sleep_power").get<std::string>();
        if (name == "zero") {
            cfg.sleep_power = SleepPower::Zero;
        } else if (name == "table") {
            cfg.sleep_power = SleepPower::Table;
        } else {
            throw ConfigError("unknown sleep_power '" + name + "' (expected zero|table)");
        }
    }

    if (j.contains("components")) {
        const auto& c = j.at("components");
        read_to(c, "optional_utilization_threshold", cfg.components.optional_utilization_threshold);
        read_to(c, "optional_percentage", cfg.components.optional_percentage);
        read_to(c, "connected_percentage", cfg.components.connected_percentage);
        if (c.contains("discount")) {
            cfg.components.discount_total = c.at("discount").get<double>();
        }
        read_to(c, "component_count", cfg.components.component_count);
        if (c.contains("pattern")) {
            cfg.components.pattern = pattern_from_string(c.at("pattern").get<std::string>());
        }
        if (c.contains("sigma")) {
            cfg.components.sigma = c.at("sigma").get<double>();
        }
        read_to(c, "max_retries", cfg.components.max_retries);
    }

    if (j.contains("trace")) {
        const auto& t = j.at("trace");
        if (t.contains("kind")) {
            cfg.trace.kind = trace_kind_from_string(t.at("kind").get<std::string>());
        }
        if (t.contains("trace_dir")) {
            cfg.trace.trace_dir = t.at("trace_dir").get<std::string>();
        }
        read_to(t, "constant_level", cfg.trace.constant_level);
        read_to(t, "walk_start", cfg.trace.walk_start);
        read_to(t, "walk_step", cfg.trace.walk_step);
        read_to(t, "walk_min", cfg.trace.walk_min);
        read_to(t, "walk_max", cfg.trace.walk_max);
    }

    read_to(j, "seed", cfg.seed);
    read_to(j, "alpha", cfg.alpha);
    read_to(j, "epsilon", cfg.epsilon);
    if (j.contains("power_table_file")) {
        cfg.power_table_file = std::filesystem::path(j.at("power_table_file").get<std::string>());
    }
    read_to(j, "host_power_tables", cfg.host_power_tables);
    read_to(j, "power_models", cfg.power_models);
    if (j.contains("baseline_energy_kwh")) {
        cfg.baseline_energy_kwh = j.at("baseline_energy_kwh").get<double>();
    }
    return cfg;
}

ordered_json run_config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["hosts_per_type"] = cfg.hosts_per_type;
    j["vms_per_type"] = cfg.vms_per_type;
    j["horizon_intervals"] = cfg.horizon_intervals;
    j["interval_seconds"] = cfg.interval_seconds;
    j["algorithm"] = to_string(cfg.algorithm);
    j["policy"] = to_string(cfg.policy);
    j["upper_threshold"] = cfg.thresholds.upper;
    j["lower_threshold"] = cfg.thresholds.lower;
    j["lambda"] = cfg.thresholds.lambda;
    j["power_threshold"] = cfg.power_threshold;
    j["ubp_formula"] = cfg.ubp_formula == UbpFormula::Corrected ? "corrected" : "as_printed";
    j["sleep_power"] = cfg.sleep_power == SleepPower::Zero ? "zero" : "table";
    ordered_json c;
    c["optional_utilization_threshold"] = cfg.components.optional_utilization_threshold;
    c["optional_percentage"] = cfg.components.optional_percentage;
    c["connected_percentage"] = cfg.components.connected_percentage;
    c["discount"] = cfg.components.resolved_discount_total();
    c["component_count"] = cfg.components.component_count;
    c["pattern"] = to_string(cfg.components.pattern);
    c["sigma"] = cfg.components.resolved_sigma();
    c["max_retries"] = cfg.components.max_retries;
    j["components"] = std::move(c);
    ordered_json t;
    t["kind"] = to_string(cfg.trace.kind);
    if (cfg.trace.kind == TraceSource::Kind::PlanetLabFiles) {
        t["trace_dir"] = cfg.trace.trace_dir.string();
    } else if (cfg.trace.kind == TraceSource::Kind::Constant) {
        t["constant_level"] = cfg.trace.constant_level;
    } else {
        t["walk_start"] = cfg.trace.walk_start;
        t["walk_step"] = cfg.trace.walk_step;
        t["walk_min"] = cfg.trace.walk_min;
        t["walk_max"] = cfg.trace.walk_max;
    }
    j["trace"] = std::move(t);
    j["seed"] = cfg.seed;
    j["alpha"] = cfg.alpha;
    j["epsilon"] = cfg.epsilon;
    if (cfg.power_table_file) {
        j["power_table_file"] = cfg.power_table_file->string();
    }
    if (!cfg.host_power_tables.empty()) {
        j["host_power_tables"] = cfg.host_power_tables;
    }
    if (!cfg.power_models.empty()) {
        j["power_models"] = cfg.power_models;
    }
    if (cfg.baseline_energy_kwh) {
        j["baseline_energy_kwh"] = *cfg.baseline_energy_kwh;
    }
    return j;
}

}  // namespace

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "pco") return Algorithm::Pco;
    if (name == "ubp") return Algorithm::Ubp;
    if (name == "eeba") return Algorithm::Eeba;
    throw ConfigError("unknown algorithm '" + name + "' (expected pco|ubp|eeba)");
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Pco: return "pco";
        case Algorithm::Ubp: return "ubp";
        case Algorithm::Eeba: return "eeba";
    }
    return "?";
}

int RunConfig::total_hosts() const {
    int n = 0;
    for (const int c : hosts_per_type) {
        n += c;
    }
    return n;
}

int RunConfig::total_vms() const {
    int n = 0;
    for (const int c : vms_per_type) {
        n += c;
    }
    return n;
}

bool RunConfig::homogeneous_fleet() const {
    int host_kinds = 0;
    for (const int c : hosts_per_type) {
        host_kinds += c > 0 ? 1 : 0;
    }
    int vm_kinds = 0;
    for (const int c : vms_per_type) {
        vm_kinds += c > 0 ? 1 : 0;
    }
    return host_kinds == 1 && vm_kinds == 1;
}

void RunConfig::validate() const {
    if (hosts_per_type.size() != default_host_types().size()) {
        throw ConfigError("hosts_per_type must list a count per host type (" +
                          std::to_string(default_host_types().size()) + " types)");
    }
    if (vms_per_type.size() != default_vm_types().size()) {
        throw ConfigError("vms_per_type must list a count per VM type (" +
                          std::to_string(default_vm_types().size()) + " types)");
    }
    for (const int c : hosts_per_type) {
        if (c < 0) {
            throw ConfigError("hosts_per_type counts must be >= 0");
        }
    }
    for (const int c : vms_per_type) {
        if (c < 0) {
            throw ConfigError("vms_per_type counts must be >= 0");
        }
    }
    if (total_hosts() < 1) {
        throw ConfigError("at least one host is required");
    }
    if (total_vms() < 1) {
        throw ConfigError("at least one VM is required");
    }
    if (horizon_intervals < 1) {
        throw ConfigError("horizon_intervals must be >= 1");
    }
    if (!(interval_seconds > 0.0)) {
        throw ConfigError("interval_seconds must be > 0");
    }
    if (!(power_threshold > 0.0 && power_threshold <= 1.0)) {
        throw ConfigError("power_threshold outside (0, 1]");
    }
    if (alpha < 0.0) {
        throw ConfigError("alpha must be >= 0");
    }
    if (epsilon < 0.0) {
        throw ConfigError("epsilon must be >= 0");
    }
    if (!host_power_tables.empty() && host_power_tables.size() != default_host_types().size()) {
        throw ConfigError("host_power_tables must name a table per host type");
    }
    if (!power_models.empty()) {
        if (power_models.size() != default_host_types().size()) {
            throw ConfigError("power_models must list a model per host type");
        }
        for (const auto& model : power_models) {
            if (model != "table" && model != "linear") {
                throw ConfigError("unknown power model '" + model + "' (expected table|linear)");
            }
        }
    }
    thresholds.validate();
    components.validate();
    trace.validate();
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    return run_config_from_json(read_json_file(path));
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    return run_config_from_json(parse_json(text, "run config"));
}

std::string RunConfig::to_json_text(int indent) const {
    return run_config_to_json(*this).dump(indent);
}

void SweepSpec::validate() const {
    base.validate();
    auto grid_axis = [](const std::vector<double>& values, const char* what) {
        if (values.empty()) {
            throw ConfigError(std::string("sweep: empty axis ") + what);
        }
        for (const double v : values) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError(std::string("sweep: ") + what + " value outside [0, 1]");
            }
        }
    };
    grid_axis(optional_utilization_thresholds, "optional_utilization_thresholds");
    grid_axis(optional_percentages, "optional_percentages");
    grid_axis(connected_percentages, "connected_percentages");
    if (discounts) {
        grid_axis(*discounts, "discounts");
    }
    if (algorithms.empty()) {
        throw ConfigError("sweep: no algorithms listed");
    }
    for (const auto& spec : algorithms) {
        parse_algorithm_spec(spec);
    }
    if (seeds.empty()) {
        throw ConfigError("sweep: no seeds listed");
    }
    if (jobs < 1) {
        throw ConfigError("sweep: jobs must be >= 1");
    }
}

namespace {

SweepSpec sweep_from_json(const ordered_json& j) {
    SweepSpec spec;
    if (j.contains("base")) {
        spec.base = RunConfig::from_json_text(j.at("base").dump());
    }
    read_to(j, "optional_utilization_thresholds", spec.optional_utilization_thresholds);
    read_to(j, "optional_percentages", spec.optional_percentages);
    read_to(j, "connected_percentages", spec.connected_percentages);
    if (j.contains("discounts")) {
        spec.discounts = j.at("discounts").get<std::vector<double>>();
    }
    read_to(j, "algorithms", spec.algorithms);
    read_to(j, "seeds", spec.seeds);
    read_to(j, "jobs", spec.jobs);
    return spec;
}

}  // namespace

SweepSpec SweepSpec::load(const std::filesystem::path& path) {
    return sweep_from_json(read_json_file(path));
}

SweepSpec SweepSpec::from_json_text(const std::string& text) {
    return sweep_from_json(parse_json(text, "sweep spec"));
}

std::pair<Algorithm, SelectionPolicy> parse_algorithm_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        const auto algorithm = algorithm_from_string(spec);
        return {algorithm, SelectionPolicy::Lufcs};
    }
    const auto algorithm = algorithm_from_string(spec.substr(0, colon));
    if (algorithm != Algorithm::Eeba) {
        throw ConfigError("algorithm spec '" + spec + "': only eeba takes a policy suffix");
    }
    return {algorithm, selection_policy_from_string(spec.substr(colon + 1))};
}

}  // namespace brownsim
