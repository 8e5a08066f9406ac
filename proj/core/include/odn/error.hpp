#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace odn {

enum class ErrorCode {
    UnknownOnt,
    DisconnectedOnt,
    UnknownSplitterRatio,
    NotApplicable,
    EmptyTree,
    NoFeasibleReach,
    InvalidPlan,
    InvalidArgument,
    InsufficientCapacity,
    RoutesNotDisjoint,
    MissingAlternateRoute,
    InvalidParams,
    DegenerateControlPoints,
    TooFewPoints,
    SchemaError,
    DanglingReference,
    GeometryTypeMismatch,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Base for every failure raised by the library. Callers switch on code();
/// what() carries a human-readable message prefixed with the code name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace odn
