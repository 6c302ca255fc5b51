#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nwopt {

enum class ErrorCode {
    DimensionMismatch,
    NonFiniteEntry,
    InvalidArgument,
    EpsilonOutOfRange,
    DegenerateBound,
    NetTooLarge,
    InvalidGenerator,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every validation failure in the library surfaces as this exception; the
/// code lets callers (and the CLI's exit-code mapping) branch without
/// parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nwopt
