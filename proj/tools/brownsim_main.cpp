#include <CLI11.hpp>
#include <iostream>

#include "brownsim/commands.hpp"
#include "brownsim/errors.hpp"

namespace {

int dispatch(const std::function<int()>& command) {
    try {
        return command();
    } catch (const brownsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return brownsim::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return brownsim::kExitRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"brownout-enabled data center energy simulator"};
    app.require_subcommand(1);

    brownsim::CliOverrides overrides;
    std::string config_path;
    std::string report_dir;

    std::uint64_t seed = 0;
    std::string out_dir;
    std::string policy;
    std::string algorithm;
    std::string trace_dir;
    std::string format;
    int jobs = 0;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config) {
            cmd->add_option("--config", config_path, "Path to the JSON config")->required();
        }
        cmd->add_option("--seed", seed, "Override the run seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
        cmd->add_option("--policy", policy, "Component selection policy (nufcs|lufcs|lpfcs|huprfcs)");
        cmd->add_option("--algorithm", algorithm, "Algorithm (pco|ubp|eeba or eeba:<policy>)");
        cmd->add_option("--trace-dir", trace_dir, "Directory of PlanetLab-style trace files");
        cmd->add_option("--format", format, "Output format (csv|summary; default both)");
    };

    auto* run_cmd = app.add_subcommand("run", "Execute a single simulation run");
    add_common(run_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "Execute a parameter sweep");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--jobs", jobs, "Parallel sweep workers");

    auto* compare_cmd = app.add_subcommand("compare", "Summarize a sweep into per-cell policy recommendations");
    compare_cmd->add_option("--report-dir", report_dir, "Directory containing results.csv")->required();

    CLI11_PARSE(app, argc, argv);

    auto collect = [&](CLI::App* cmd) {
        if (cmd->count("--seed") > 0) overrides.seed = seed;
        if (cmd->count("--out-dir") > 0) overrides.out_dir = out_dir;
        if (cmd->count("--policy") > 0) overrides.policy = policy;
        if (cmd->count("--algorithm") > 0) overrides.algorithm = algorithm;
        if (cmd->count("--trace-dir") > 0) overrides.trace_dir = trace_dir;
        if (cmd->count("--format") > 0) overrides.format = format;
    };

    if (run_cmd->parsed()) {
        collect(run_cmd);
        return dispatch([&] { return brownsim::cmd_run(config_path, overrides, std::cout, std::cerr); });
    }
    if (sweep_cmd->parsed()) {
        collect(sweep_cmd);
        if (sweep_cmd->count("--jobs") > 0) overrides.jobs = jobs;
        return dispatch([&] { return brownsim::cmd_sweep(config_path, overrides, std::cout, std::cerr); });
    }
    collect(compare_cmd);
    return dispatch([&] { return brownsim::cmd_compare(report_dir, overrides, std::cout, std::cerr); });
}
