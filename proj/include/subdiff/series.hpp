#pragma once

#include <string>
#include <vector>

namespace subdiff {

/// Scalar function of time sampled on strictly increasing nodes.
struct TimeSeries {
    std::vector<double> t_values;
    std::vector<double> values;
    std::string label;

    std::size_t size() const noexcept { return t_values.size(); }
};

/// Samples u(j * step), j = 0..n-1, on a uniform grid starting at t = 0.
struct UniformSamples {
    double step = 0.0;
    std::vector<double> values;
};

/// Log-spaced grid from t_min to t_max (inclusive) with the given density.
std::vector<double> log_grid(double t_min, double t_max, int points_per_decade);

/// Validates the TimeSeries invariants (sizes match, t strictly increasing and
/// positive, values finite); throws Error(Shape) otherwise.
void validate(const TimeSeries& series);

}  // namespace subdiff
