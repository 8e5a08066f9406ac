#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace odn {

enum class ViolationCode {
    // structural
    DuplicateId,
    UnknownNodeReference,
    MissingRoot,
    MultipleRoots,
    CycleDetected,
    DisconnectedNode,
    MissingLength,
    InvalidCoordinate,
    InvalidFiberCount,
    NonStandardFiberCount,
    DropFiberCount,
    InvalidSplitter,
    DualInputWithoutProtection,
    InvalidReachLimit,
    // engineering limits
    SplitCapExceeded,
    SplitterLevelOrder,
    ReachExceeded,
    // planning rules
    DirectFeedMissed,
    OltOverlap,
    DrumLengthWarning,
    SplitterLevelExceeded,
    InvalidServiceArea,
};

enum class Severity { Error, Warning };

std::string_view to_string(ViolationCode code);
std::string_view to_string(Severity severity);

/// One finding from a structural or planning check. Checks return these as
/// data so a planner sees every problem in a design at once.
struct Violation {
    ViolationCode code;
    Severity severity = Severity::Error;
    std::string subject_id;
    std::string message;
    std::string rule_ref;

    friend bool operator==(const Violation&, const Violation&) = default;
};

bool has_errors(const std::vector<Violation>& violations);

/// {code, severity, subject_id, message, rule_ref}
nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const std::vector<Violation>& vs);

}  // namespace odn
