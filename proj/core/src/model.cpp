#include "odn/model.hpp"

#include "odn/error.hpp"
#include "odn/geodesy.hpp"
#include "odn/violation.hpp"

#include <algorithm>
#include <stdexcept>

namespace odn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownOnt: return "UnknownOnt";
        case ErrorCode::DisconnectedOnt: return "DisconnectedOnt";
        case ErrorCode::UnknownSplitterRatio: return "UnknownSplitterRatio";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::EmptyTree: return "EmptyTree";
        case ErrorCode::NoFeasibleReach: return "NoFeasibleReach";
        case ErrorCode::InvalidPlan: return "InvalidPlan";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
        case ErrorCode::RoutesNotDisjoint: return "RoutesNotDisjoint";
        case ErrorCode::MissingAlternateRoute: return "MissingAlternateRoute";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::DegenerateControlPoints: return "DegenerateControlPoints";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::DanglingReference: return "DanglingReference";
        case ErrorCode::GeometryTypeMismatch: return "GeometryTypeMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::string_view to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::DuplicateId: return "DuplicateId";
        case ViolationCode::UnknownNodeReference: return "UnknownNodeReference";
        case ViolationCode::MissingRoot: return "MissingRoot";
        case ViolationCode::MultipleRoots: return "MultipleRoots";
        case ViolationCode::CycleDetected: return "CycleDetected";
        case ViolationCode::DisconnectedNode: return "DisconnectedNode";
        case ViolationCode::MissingLength: return "MissingLength";
        case ViolationCode::InvalidCoordinate: return "InvalidCoordinate";
        case ViolationCode::InvalidFiberCount: return "InvalidFiberCount";
        case ViolationCode::NonStandardFiberCount: return "NonStandardFiberCount";
        case ViolationCode::DropFiberCount: return "DropFiberCount";
        case ViolationCode::InvalidSplitter: return "InvalidSplitter";
        case ViolationCode::DualInputWithoutProtection: return "DualInputWithoutProtection";
        case ViolationCode::InvalidReachLimit: return "InvalidReachLimit";
        case ViolationCode::SplitCapExceeded: return "SplitCapExceeded";
        case ViolationCode::SplitterLevelOrder: return "SplitterLevelOrder";
        case ViolationCode::ReachExceeded: return "ReachExceeded";
        case ViolationCode::DirectFeedMissed: return "DirectFeedMissed";
        case ViolationCode::OltOverlap: return "OltOverlap";
        case ViolationCode::DrumLengthWarning: return "DrumLengthWarning";
        case ViolationCode::SplitterLevelExceeded: return "SplitterLevelExceeded";
        case ViolationCode::InvalidServiceArea: return "InvalidServiceArea";
    }
    return "Unknown";
}

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

bool has_errors(const std::vector<Violation>& violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::Error; });
}

nlohmann::json to_json(const Violation& v) {
    return {{"code", to_string(v.code)},
            {"severity", to_string(v.severity)},
            {"subject_id", v.subject_id},
            {"message", v.message},
            {"rule_ref", v.rule_ref}};
}

nlohmann::json to_json(const std::vector<Violation>& vs) {
    auto arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back(to_json(v));
    return arr;
}

namespace {

struct KindName {
    NodeKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {NodeKind::CentralOfficeOlt, "olt"}, {NodeKind::Fdh, "fdh"},           {NodeKind::Fat, "fat"},
    {NodeKind::JointBox, "joint_box"},   {NodeKind::MicroOdf, "micro_odf"}, {NodeKind::Manhole, "manhole"},
    {NodeKind::Handhole, "handhole"},    {NodeKind::Ont, "ont"},
};

}  // namespace

std::string_view to_string(NodeKind kind) {
    for (const auto& k : kKindNames)
        if (k.kind == kind) return k.name;
    return "unknown";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text) {
    for (const auto& k : kKindNames)
        if (k.name == text) return k.kind;
    return std::nullopt;
}

bool is_equipment(NodeKind kind) {
    switch (kind) {
        case NodeKind::JointBox:
        case NodeKind::Manhole:
        case NodeKind::Handhole: return false;
        default: return true;
    }
}

std::string_view to_string(CableRole role) {
    switch (role) {
        case CableRole::Feeder: return "feeder";
        case CableRole::Distribution: return "distribution";
        case CableRole::Drop: return "drop";
    }
    return "unknown";
}

std::optional<CableRole> cable_role_from_string(std::string_view text) {
    if (text == "feeder") return CableRole::Feeder;
    if (text == "distribution") return CableRole::Distribution;
    if (text == "drop") return CableRole::Drop;
    return std::nullopt;
}

std::optional<SplitRatio> split_ratio_from_int(int output_ports) {
    for (auto r : kAllSplitRatios)
        if (ports(r) == output_ports) return r;
    return std::nullopt;
}

std::string to_string(SplitRatio r) { return "1:" + std::to_string(ports(r)); }

std::string_view to_string(ProtectionType p) {
    switch (p) {
        case ProtectionType::TypeA: return "A";
        case ProtectionType::TypeB: return "B";
        case ProtectionType::TypeC: return "C";
    }
    return "?";
}

std::optional<ProtectionType> protection_from_string(std::string_view text) {
    if (text == "A" || text == "a" || text == "TypeA") return ProtectionType::TypeA;
    if (text == "B" || text == "b" || text == "TypeB") return ProtectionType::TypeB;
    if (text == "C" || text == "c" || text == "TypeC") return ProtectionType::TypeC;
    return std::nullopt;
}

Decimal FiberSegment::effective_length_km() const {
    if (length_km) return *length_km;
    return Decimal::from_double(geo::geodesic_length_km(geometry)).rounded(6);
}

CableLadder::CableLadder() : sizes_{2, 8, 16, 24, 48, 96} {}

CableLadder::CableLadder(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw Error(ErrorCode::InvalidArgument, "cable ladder is empty");
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] <= 0) throw Error(ErrorCode::InvalidArgument, "cable ladder sizes must be positive");
        if (i > 0 && sizes_[i] <= sizes_[i - 1])
            throw Error(ErrorCode::InvalidArgument, "cable ladder must be strictly increasing");
    }
}

bool CableLadder::contains(int fibers) const { return std::binary_search(sizes_.begin(), sizes_.end(), fibers); }

const OdnNode* PonTree::find_node(std::string_view id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const OdnNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

const FiberSegment* PonTree::find_segment(std::string_view id) const {
    auto it = std::find_if(segments.begin(), segments.end(), [&](const FiberSegment& s) { return s.id == id; });
    return it == segments.end() ? nullptr : &*it;
}

const SplitterSpec* PonTree::splitter_at(std::string_view node_id) const {
    auto it = std::find_if(splitters.begin(), splitters.end(),
                           [&](const SplitterSpec& s) { return s.node_id == node_id; });
    return it == splitters.end() ? nullptr : &*it;
}

std::vector<std::string> PonTree::ont_ids() const {
    std::vector<std::string> ids;
    for (const auto& n : nodes)
        if (n.kind == NodeKind::Ont) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace odn
