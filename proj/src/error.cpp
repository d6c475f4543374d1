#include "arcmem/error.hpp"

namespace arcmem {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::validation_error: return "ValidationError";
        case ErrorCode::non_positive_conductance: return "NonPositiveConductance";
        case ErrorCode::step_underflow: return "StepUnderflow";
        case ErrorCode::max_steps_exceeded: return "MaxStepsExceeded";
        case ErrorCode::not_converged: return "NotConverged";
        case ErrorCode::no_crossings: return "NoCrossings";
        case ErrorCode::degenerate_range: return "DegenerateRange";
        case ErrorCode::unsupported_theta_law: return "UnsupportedThetaLaw";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::buffer_too_small: return "BufferTooSmall";
        case ErrorCode::internal: return "Internal";
    }
    return "Unknown";
}

bool is_numeric_failure(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::non_positive_conductance:
        case ErrorCode::step_underflow:
        case ErrorCode::max_steps_exceeded:
        case ErrorCode::not_converged:
        case ErrorCode::no_crossings:
        case ErrorCode::degenerate_range:
        case ErrorCode::unsupported_theta_law:
            return true;
        default:
            return false;
    }
}

}  // namespace arcmem
