#pragma once

#include "odn/coordinate.hpp"
#include "odn/decimal.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odn {

enum class NodeKind { CentralOfficeOlt, Fdh, Fat, JointBox, MicroOdf, Manhole, Handhole, Ont };

/// Wire names: "olt", "fdh", "fat", "joint_box", "micro_odf", "manhole", "handhole", "ont".
std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

/// Equipment lives in the equipment layer, civil structures in the structures layer.
bool is_equipment(NodeKind kind);

enum class CableRole { Feeder, Distribution, Drop };

std::string_view to_string(CableRole role);
std::optional<CableRole> cable_role_from_string(std::string_view text);

/// Splitter output port counts (no 1:1).
enum class SplitRatio : int { R2 = 2, R4 = 4, R8 = 8, R16 = 16, R32 = 32, R64 = 64 };

inline constexpr std::array<SplitRatio, 6> kAllSplitRatios = {SplitRatio::R2,  SplitRatio::R4,  SplitRatio::R8,
                                                              SplitRatio::R16, SplitRatio::R32, SplitRatio::R64};

constexpr int ports(SplitRatio r) { return static_cast<int>(r); }
std::optional<SplitRatio> split_ratio_from_int(int output_ports);
/// "1:32"
std::string to_string(SplitRatio r);

enum class ProtectionType { TypeA, TypeB, TypeC };

std::string_view to_string(ProtectionType p);
std::optional<ProtectionType> protection_from_string(std::string_view text);

struct OdnNode {
    std::string id;
    NodeKind kind = NodeKind::Ont;
    Coordinate position;
    std::optional<std::string> label;
    /// Terminal context of an ONT ("villa", "building", "curb", "bts", ...).
    std::optional<std::string> terminal;

    friend bool operator==(const OdnNode&, const OdnNode&) = default;
};

struct FiberSegment {
    std::string id;
    std::string from_node;
    std::string to_node;
    CableRole role = CableRole::Feeder;
    int fiber_count = 2;
    std::optional<Decimal> length_km;
    std::vector<Coordinate> geometry;
    int splice_count = 0;
    int connector_count = 0;
    /// Fiber count off the standard ladder (or a drop that is not 2F).
    bool nonstandard = false;
    /// Protection route; carried in the plan but not on any working path.
    bool standby = false;

    /// length_km when given, otherwise the geodesic length of the geometry
    /// at millimetre resolution. Throws Error{TooFewPoints} when neither is usable.
    Decimal effective_length_km() const;

    friend bool operator==(const FiberSegment&, const FiberSegment&) = default;
};

struct SplitterSpec {
    std::string node_id;
    int input_ports = 1;
    SplitRatio output = SplitRatio::R32;
    int level = 1;

    friend bool operator==(const SplitterSpec&, const SplitterSpec&) = default;
};

/// Standard fiber counts, strictly increasing.
class CableLadder {
public:
    CableLadder();
    explicit CableLadder(std::vector<int> sizes);

    const std::vector<int>& sizes() const { return sizes_; }
    bool contains(int fibers) const;
    int largest() const { return sizes_.back(); }

private:
    std::vector<int> sizes_;
};

/// One OLT PON port and the passive tree hanging off it.
struct PonTree {
    std::string root_port;
    std::vector<OdnNode> nodes;
    std::vector<FiberSegment> segments;
    std::vector<SplitterSpec> splitters;
    int physical_reach_limit_km = 20;
    ProtectionType protection = ProtectionType::TypeA;

    const OdnNode* find_node(std::string_view id) const;
    const FiberSegment* find_segment(std::string_view id) const;
    const SplitterSpec* splitter_at(std::string_view node_id) const;
    /// Ont node ids, sorted.
    std::vector<std::string> ont_ids() const;

    friend bool operator==(const PonTree&, const PonTree&) = default;
};

}  // namespace odn
