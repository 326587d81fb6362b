#pragma once

#include <stdexcept>
#include <string>

namespace spw {

/// Error categories; values mirror the spw_status codes of the C API.
enum class ErrorCode {
    invalid_argument = 1,
    io = 2,
    parse = 3,
    dimension_mismatch = 4,
    empty_input = 5,
    numeric = 6,
    not_converged = 7,
    unknown = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace spw
