#pragma once

// Experiment configuration: a sectioned key = value file in TOML syntax (strings,
// numbers, booleans, one-line numeric arrays, # comments).
//
//   [kernel]      type = "stable" | "distributed_asymptotic" | "inverse_gamma" | "gamma"
//                        | "tempered_stable" | "distributed_mu", plus the class parameters
//   [problem]     alpha, gamma, a, b, s, N, datum = "gaussian" | "indicator" | "table",
//                 width, radius, datum_table; or synthetic_v (tau,v CSV) with tail_exponent
//   [eval]        x
//   [t_grid]      t_min, t_max, points_per_decade
//   [lambda_grid] lambda_min, lambda_max, points_per_decade
//   [tau_grid]    values = [...] or tau_min, tau_max, points
//   [x_grid]      values = [...] or x_min, x_max, points
//   [verify]      fit_t_lo, fit_t_hi, t_check, lambda, alt_route
//   [tolerances]  slope, constant, route, laplace, tauberian, mass, cross_check
//   seed          (top level)

#include "subdiff/asymptotics.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pdesol.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subdiff {

struct LogGridSpec {
    double min = 0.0;
    double max = 0.0;
    int points_per_decade = 0;

    std::vector<double> values() const { return log_grid(min, max, points_per_decade); }
};

struct Tolerances {
    double slope = 0.05;
    double constant = 0.05;
    double route = 0.01;
    double laplace = 0.01;
    double tauberian = 0.07;
    double mass = 1e-4;
    double cross_check = 1e-6;
};

struct VerifyOptions {
    std::optional<double> fit_t_lo;
    std::optional<double> fit_t_hi;
    std::optional<double> t_check;  ///< defaults to the end of the t grid
    double lambda = 1e-4;           ///< Laplace-side point for class C2
    bool alt_route = true;
};

struct SyntheticV {
    std::filesystem::path path;
    std::vector<double> tau;
    std::vector<double> values;
    double tail_exponent = 0.0;
};

struct ExperimentConfig {
    std::string source;  ///< file name used in diagnostics

    std::optional<KernelSpec> kernel;
    std::optional<ProblemSpec> problem;
    std::optional<SyntheticV> synthetic_v;
    std::filesystem::path datum_table;  ///< empty unless datum = "table"

    double x_eval = 0.0;
    std::optional<LogGridSpec> t_grid;
    std::optional<LogGridSpec> lambda_grid;
    std::vector<double> tau_values;
    std::vector<double> x_values;

    VerifyOptions verify;
    Tolerances tol;
    std::uint64_t seed = 0;

    /// v(x_eval, .) from the synthetic table or the PDE solution.
    VProfile profile() const;

    /// Resolved configuration in the input syntax, every default made explicit.
    std::string echo() const;
};

/// Error(Parse) with "<source>:<line>: field '<section.key>': ..." diagnostics. Relative
/// table paths are resolved against `base_dir` and must exist.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                              const std::string& source = "<config>");

/// Reads and parses a file; Error(Io) when it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Two-column numeric CSV with one header line.
void read_two_columns(const std::filesystem::path& path, std::vector<double>& a, std::vector<double>& b);

}  // namespace subdiff
