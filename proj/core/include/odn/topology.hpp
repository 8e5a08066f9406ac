#pragma once

#include "odn/model.hpp"
#include "odn/violation.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace odn {

struct TopologyOptions {
    /// Maximum product of splitter ratios on any path; 64 by default, 128 allowed.
    int split_cap = 64;
    CableLadder ladder;
};

struct PathSplitter {
    std::string node_id;
    SplitRatio ratio = SplitRatio::R2;
    int level = 1;
    int input_ports = 1;

    friend bool operator==(const PathSplitter&, const PathSplitter&) = default;
};

/// Root-to-ONT route with its aggregated counts.
struct PathDescriptor {
    std::string ont_id;
    std::vector<std::string> node_ids;
    std::vector<std::string> segment_ids;
    std::vector<PathSplitter> splitters;
    Decimal length_km;
    int splice_count = 0;
    int connector_count = 0;

    std::vector<SplitRatio> ratios() const;

    friend bool operator==(const PathDescriptor&, const PathDescriptor&) = default;
};

/// Checks every PonTree invariant. Returns an empty list iff the tree is
/// sound; malformed references are reported, never thrown.
std::vector<Violation> validate_topology(const PonTree& tree, const TopologyOptions& options = {});

/// Working (non-standby) path from the root OLT to `ont_id`.
/// Throws Error{UnknownOnt} or Error{DisconnectedOnt}.
PathDescriptor path_to_ont(const PonTree& tree, std::string_view ont_id);

/// Working path from the root OLT to any node of the tree; `ont_id` of the
/// result holds the target id. Throws Error{InvalidArgument} for an unknown
/// node and Error{DisconnectedOnt} when it cannot be reached.
PathDescriptor path_to_node(const PonTree& tree, std::string_view node_id);

/// Paths to every ONT reachable from the root, ordered by ONT id.
std::vector<PathDescriptor> ont_paths(const PonTree& tree);

/// Product of splitter ratios on the path; 1 for a point-to-point path.
int total_split(const PathDescriptor& path);
int total_split(const PonTree& tree, std::string_view ont_id);

/// The tree's CentralOfficeOlt node, or nullptr when there is not exactly one.
const OdnNode* root_olt(const PonTree& tree);

}  // namespace odn
