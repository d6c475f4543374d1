#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arcmem {

/// Failure categories shared by the C++ core and the C API.
/// Values are stable: the C API returns them verbatim as `arcmem_status`.
enum class ErrorCode : int {
    invalid_argument = 1,
    parse_error = 2,
    validation_error = 3,
    non_positive_conductance = 4,
    step_underflow = 5,
    max_steps_exceeded = 6,
    not_converged = 7,
    no_crossings = 8,
    degenerate_range = 9,
    unsupported_theta_law = 10,
    io_error = 11,
    buffer_too_small = 12,
    internal = 99,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the codes that describe a failed computation rather than bad input.
bool is_numeric_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace arcmem
