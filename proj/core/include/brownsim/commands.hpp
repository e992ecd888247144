#ifndef BROWNSIM_COMMANDS_HPP
#define BROWNSIM_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace brownsim {

// Exit codes shared by the CLI and the command layer.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;
inline constexpr int kExitPartialSweep = 4;

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::string> policy;
    std::optional<std::string> algorithm;
    std::optional<std::filesystem::path> trace_dir;
    std::optional<std::string> format;  // csv | summary (default: both)
    std::optional<int> jobs;
};

// Executes one run and writes run.csv / series.csv / summary.json into the
// output directory; prints a one-line summary.
int cmd_run(const std::filesystem::path& config_path, const CliOverrides& overrides, std::ostream& out,
            std::ostream& err);

// Executes the sweep grid x algorithms x seeds and writes results.csv /
// aggregate.csv / summary.json. Failed cells are recorded and skipped;
// any failure turns the exit code into kExitPartialSweep.
int cmd_sweep(const std::filesystem::path& sweep_path, const CliOverrides& overrides, std::ostream& out,
              std::ostream& err);

// Reads a sweep's results.csv and emits the per-cell recommended policy
// (lowest efficiency score) with its confidence interval.
int cmd_compare(const std::filesystem::path& report_dir, const CliOverrides& overrides, std::ostream& out,
                std::ostream& err);

}  // namespace brownsim

#endif
