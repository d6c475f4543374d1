#pragma once

#include "arcmem/scenario.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

namespace arcmem {

enum class Command { simulate, fingerprints, sweep, table1 };

std::optional<Command> parse_command(std::string_view name) noexcept;

/// Process exit codes of the command-line front end.
enum class ExitCode : int {
    success = 0,
    validation = 1,
    numeric = 2,
    fingerprint = 3,
};

struct RunOptions {
    std::filesystem::path out_dir;  // empty: scenario.output.directory
    bool assert_fingerprints = false;
    std::size_t jobs = 0;
    bool raw_steps = false;
};

/// Runs one subcommand and writes its artifacts. Never throws: failures are
/// reported on `log` and through the returned exit code.
///
///   simulate      waveform.csv, settle_report.csv, [steps.csv], simulate_summary.txt
///   fingerprints  fingerprints.csv, pinch_points.csv, fingerprint_sweep.csv,
///                 fingerprints_summary.txt
///   sweep         sweep_metrics.csv, sweep_<n>_waveform.csv, sweep_summary.txt
///   table1        table1.csv, table1_summary.txt
ExitCode run_command(Command command, const Scenario& scenario, const RunOptions& options,
                     std::ostream& log);

}  // namespace arcmem
