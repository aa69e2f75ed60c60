#pragma once

// Subcommands of the experiment runner. Each writes its CSV outputs and
// run.manifest.txt into the output directory; files appear atomically.

#include "subdiff/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace subdiff {

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct RunResult {
    std::vector<std::string> outputs;   ///< file names written, manifest last
    std::vector<std::string> warnings;
    std::vector<Check> checks;          ///< verify only
    std::string summary;                ///< human-readable, one line per check or output

    bool passed() const;
};

/// "kernel-eval", "density", "solve", "cesaro" or "verify". Module errors propagate as
/// Error; a verify run whose checks fail returns normally with passed() == false.
RunResult run_command(const std::string& command, const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

const std::vector<std::string>& command_names();

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Manifest for a run that stopped with an error before writing its outputs.
void write_failure_manifest(const std::string& command, const std::string& config_text,
                            const std::filesystem::path& out_dir, const std::string& message);

}  // namespace subdiff
