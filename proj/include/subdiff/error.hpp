#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace subdiff {

enum class ErrorCode {
    Domain,       // argument outside the mathematical domain
    Accuracy,     // numerical method did not reach its tolerance
    Unsupported,  // valid input the library does not handle (kernel, range, configuration)
    Divergence,   // requested quantity is infinite (e.g. non-integrable solution)
    Parse,        // configuration / table input could not be read
    Shape,        // array sizes or grids inconsistent
    Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<double> best_estimate = std::nullopt)
        : std::runtime_error(what), code_(code), estimate_(best_estimate) {}

    ErrorCode code() const noexcept { return code_; }

    /// Best available value when the failure is an accuracy shortfall.
    std::optional<double> best_estimate() const noexcept { return estimate_; }

private:
    ErrorCode code_;
    std::optional<double> estimate_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what,
                              std::optional<double> estimate = std::nullopt) {
    throw Error(code, what, estimate);
}

}  // namespace subdiff
