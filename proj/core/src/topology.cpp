#include "odn/topology.hpp"

#include "odn/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>

namespace odn {

namespace {

constexpr std::string_view kRuleTree = "odn.tree-structure";
constexpr std::string_view kRuleSplit = "odn.split-cap";
constexpr std::string_view kRuleReach = "odn.physical-reach";
constexpr std::string_view kRuleSplitter = "odn.splitter";
constexpr std::string_view kRuleCable = "odn.cable-ladder";
constexpr std::string_view kRuleGeo = "odn.coordinates";

Violation make(ViolationCode code, Severity sev, std::string subject, std::string message, std::string_view rule) {
    return Violation{code, sev, std::move(subject), std::move(message), std::string(rule)};
}

// Undirected adjacency over working (non-standby) segments whose endpoints resolve.
struct Graph {
    std::unordered_map<std::string_view, std::size_t> node_index;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency;  // (neighbor, segment)

    explicit Graph(const PonTree& tree) : adjacency(tree.nodes.size()) {
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) node_index.emplace(tree.nodes[i].id, i);
        for (std::size_t s = 0; s < tree.segments.size(); ++s) {
            const auto& seg = tree.segments[s];
            if (seg.standby) continue;
            auto a = node_index.find(seg.from_node);
            auto b = node_index.find(seg.to_node);
            if (a == node_index.end() || b == node_index.end() || a->second == b->second) continue;
            adjacency[a->second].emplace_back(b->second, s);
            adjacency[b->second].emplace_back(a->second, s);
        }
    }

    std::optional<std::size_t> index_of(std::string_view id) const {
        auto it = node_index.find(id);
        if (it == node_index.end()) return std::nullopt;
        return it->second;
    }
};

struct Parent {
    std::size_t node = 0;
    std::size_t segment = 0;
};

// Breadth-first spanning tree from `root`; first discovery wins, so extra
// edges in a cyclic input are simply ignored here.
std::vector<std::optional<Parent>> bfs_parents(const Graph& g, std::size_t root, std::vector<bool>& reached) {
    std::vector<std::optional<Parent>> parent(g.adjacency.size());
    reached.assign(g.adjacency.size(), false);
    std::deque<std::size_t> queue{root};
    reached[root] = true;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (auto [v, s] : g.adjacency[u]) {
            if (reached[v]) continue;
            reached[v] = true;
            parent[v] = Parent{u, s};
            queue.push_back(v);
        }
    }
    return parent;
}

PathDescriptor build_path(const PonTree& tree, const std::vector<std::optional<Parent>>& parent, std::size_t root,
                          std::size_t target) {
    std::vector<std::size_t> nodes{target};
    std::vector<std::size_t> segs;
    for (auto cur = target; cur != root;) {
        const auto& p = *parent[cur];
        segs.push_back(p.segment);
        cur = p.node;
        nodes.push_back(cur);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(segs.begin(), segs.end());

    PathDescriptor path;
    path.ont_id = tree.nodes[target].id;
    for (auto n : nodes) {
        const auto& id = tree.nodes[n].id;
        path.node_ids.push_back(id);
        if (n == target) continue;
        if (const auto* sp = tree.splitter_at(id)) {
            path.splitters.push_back(PathSplitter{id, sp->output, sp->level, sp->input_ports});
        }
    }
    for (auto s : segs) {
        const auto& seg = tree.segments[s];
        path.segment_ids.push_back(seg.id);
        path.length_km += seg.effective_length_km();
        path.splice_count += seg.splice_count;
        path.connector_count += seg.connector_count;
    }
    return path;
}

std::optional<std::size_t> root_index(const PonTree& tree, const Graph& g) {
    const auto* root = root_olt(tree);
    if (!root) return std::nullopt;
    return g.index_of(root->id);
}

bool has_usable_length(const FiberSegment& s) {
    return s.length_km.has_value() || s.geometry.size() >= 2;
}

}  // namespace

std::vector<SplitRatio> PathDescriptor::ratios() const {
    std::vector<SplitRatio> out;
    out.reserve(splitters.size());
    for (const auto& s : splitters) out.push_back(s.ratio);
    return out;
}

const OdnNode* root_olt(const PonTree& tree) {
    const OdnNode* found = nullptr;
    for (const auto& n : tree.nodes) {
        if (n.kind != NodeKind::CentralOfficeOlt) continue;
        if (found) return nullptr;
        found = &n;
    }
    return found;
}

std::vector<Violation> validate_topology(const PonTree& tree, const TopologyOptions& options) {
    std::vector<Violation> out;

    std::set<std::string_view> seen;
    for (const auto& n : tree.nodes) {
        if (!seen.insert(n.id).second)
            out.push_back(make(ViolationCode::DuplicateId, Severity::Error, n.id, "node id '" + n.id + "' is not unique",
                               kRuleTree));
        if (!is_valid_wgs84(n.position))
            out.push_back(make(ViolationCode::InvalidCoordinate, Severity::Error, n.id,
                               "position outside WGS84 lon [-180, 180], lat [-90, 90]", kRuleGeo));
    }
    std::set<std::string_view> seen_segments;
    for (const auto& s : tree.segments) {
        if (!seen_segments.insert(s.id).second)
            out.push_back(make(ViolationCode::DuplicateId, Severity::Error, s.id,
                               "segment id '" + s.id + "' is not unique", kRuleTree));
    }

    std::size_t olt_count = 0;
    for (const auto& n : tree.nodes) olt_count += n.kind == NodeKind::CentralOfficeOlt ? 1 : 0;
    if (olt_count == 0)
        out.push_back(make(ViolationCode::MissingRoot, Severity::Error, tree.root_port,
                           "tree has no central-office OLT node", kRuleTree));
    else if (olt_count > 1)
        out.push_back(make(ViolationCode::MultipleRoots, Severity::Error, tree.root_port,
                           "tree has " + std::to_string(olt_count) + " OLT nodes; exactly one is allowed", kRuleTree));

    if (tree.physical_reach_limit_km != 10 && tree.physical_reach_limit_km != 20)
        out.push_back(make(ViolationCode::InvalidReachLimit, Severity::Error, tree.root_port,
                           "physical reach limit must be 10 or 20 km, got " +
                               std::to_string(tree.physical_reach_limit_km),
                           kRuleReach));

    const Graph graph(tree);

    for (const auto& s : tree.segments) {
        bool refs_ok = true;
        for (const auto* end : {&s.from_node, &s.to_node}) {
            if (!graph.index_of(*end)) {
                out.push_back(make(ViolationCode::UnknownNodeReference, Severity::Error, s.id,
                                   "segment references unknown node '" + *end + "'", kRuleTree));
                refs_ok = false;
            }
        }
        if (refs_ok && s.from_node == s.to_node)
            out.push_back(make(ViolationCode::CycleDetected, Severity::Error, s.id,
                               "segment starts and ends at node '" + s.from_node + "'", kRuleTree));
        if (!has_usable_length(s))
            out.push_back(make(ViolationCode::MissingLength, Severity::Error, s.id,
                               "segment has neither length_km nor a polyline geometry", kRuleTree));
        else if (s.length_km && *s.length_km < Decimal{})
            out.push_back(make(ViolationCode::MissingLength, Severity::Error, s.id, "length_km is negative", kRuleTree));
        if (s.fiber_count <= 0) {
            out.push_back(make(ViolationCode::InvalidFiberCount, Severity::Error, s.id,
                               "fiber_count must be positive", kRuleCable));
        } else if (!s.nonstandard) {
            if (s.role == CableRole::Drop && s.fiber_count != 2)
                out.push_back(make(ViolationCode::DropFiberCount, Severity::Warning, s.id,
                                   "drop cable has " + std::to_string(s.fiber_count) +
                                       "F; drops are 2F unless flagged nonstandard",
                                   kRuleCable));
            else if (s.role != CableRole::Drop && !options.ladder.contains(s.fiber_count))
                out.push_back(make(ViolationCode::NonStandardFiberCount, Severity::Warning, s.id,
                                   std::to_string(s.fiber_count) + "F is not on the cable ladder", kRuleCable));
        }
        if (s.splice_count < 0 || s.connector_count < 0)
            out.push_back(make(ViolationCode::InvalidFiberCount, Severity::Error, s.id,
                               "splice and connector counts must be nonnegative", kRuleCable));
    }

    std::set<std::string_view> splitter_nodes;
    for (const auto& sp : tree.splitters) {
        const auto* node = tree.find_node(sp.node_id);
        if (!node) {
            out.push_back(make(ViolationCode::UnknownNodeReference, Severity::Error, sp.node_id,
                               "splitter placed at unknown node '" + sp.node_id + "'", kRuleSplitter));
            continue;
        }
        if (!splitter_nodes.insert(sp.node_id).second)
            out.push_back(make(ViolationCode::InvalidSplitter, Severity::Error, sp.node_id,
                               "more than one splitter of this tree at one node", kRuleSplitter));
        if (node->kind == NodeKind::Ont)
            out.push_back(make(ViolationCode::InvalidSplitter, Severity::Error, sp.node_id,
                               "splitter placed at an ONT", kRuleSplitter));
        if (sp.input_ports != 1 && sp.input_ports != 2)
            out.push_back(make(ViolationCode::InvalidSplitter, Severity::Error, sp.node_id,
                               "splitter input ports must be 1 or 2", kRuleSplitter));
        if (sp.level < 1 || sp.level > 3)
            out.push_back(make(ViolationCode::InvalidSplitter, Severity::Error, sp.node_id,
                               "splitter level must be 1, 2 or 3, got " + std::to_string(sp.level), kRuleSplitter));
        if (sp.input_ports == 2 && tree.protection == ProtectionType::TypeA)
            out.push_back(make(ViolationCode::DualInputWithoutProtection, Severity::Error, sp.node_id,
                               "2:N splitter requires type B or C protection", kRuleSplitter));
    }

    // Cycle detection over working segments with union-find.
    std::vector<std::size_t> uf(tree.nodes.size());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](std::size_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    for (const auto& s : tree.segments) {
        if (s.standby || s.from_node == s.to_node) continue;
        auto a = graph.index_of(s.from_node);
        auto b = graph.index_of(s.to_node);
        if (!a || !b) continue;
        auto ra = find(*a), rb = find(*b);
        if (ra == rb)
            out.push_back(make(ViolationCode::CycleDetected, Severity::Error, s.id,
                               "segment closes a loop between '" + s.from_node + "' and '" + s.to_node + "'",
                               kRuleTree));
        else
            uf[ra] = rb;
    }

    const auto root = root_index(tree, graph);
    if (!root) return out;

    std::vector<bool> reached;
    const auto parent = bfs_parents(graph, *root, reached);

    std::set<std::string_view> standby_only;
    {
        std::set<std::string_view> working;
        for (const auto& s : tree.segments) {
            auto& bucket = s.standby ? standby_only : working;
            bucket.insert(s.from_node);
            bucket.insert(s.to_node);
        }
        for (auto w : working) standby_only.erase(w);
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (reached[i] || standby_only.count(tree.nodes[i].id)) continue;
        out.push_back(make(ViolationCode::DisconnectedNode, Severity::Error, tree.nodes[i].id,
                           "node is not connected to the OLT by working segments", kRuleTree));
    }

    const Decimal limit = Decimal::from_int(tree.physical_reach_limit_km);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (!reached[i] || tree.nodes[i].kind != NodeKind::Ont) continue;
        PathDescriptor path;
        try {
            path = build_path(tree, parent, *root, i);
        } catch (const Error&) {
            continue;  // length problem already reported above
        }
        const auto& id = tree.nodes[i].id;

        long long split = 1;
        for (const auto& sp : path.splitters) split *= ports(sp.ratio);
        if (split > options.split_cap)
            out.push_back(make(ViolationCode::SplitCapExceeded, Severity::Error, id,
                               "total split " + std::to_string(split) + " exceeds cap of " +
                                   std::to_string(options.split_cap),
                               kRuleSplit));
        if (path.length_km > limit)
            out.push_back(make(ViolationCode::ReachExceeded, Severity::Error, id,
                               "path length " + path.length_km.to_fixed(3) + " km exceeds physical reach of " +
                                   std::to_string(tree.physical_reach_limit_km) + " km",
                               kRuleReach));
        for (std::size_t k = 1; k < path.splitters.size(); ++k) {
            if (path.splitters[k].level <= path.splitters[k - 1].level) {
                out.push_back(make(ViolationCode::SplitterLevelOrder, Severity::Error, id,
                                   "splitter levels along the path are not strictly increasing", kRuleSplitter));
                break;
            }
        }
    }
    return out;
}

PathDescriptor path_to_ont(const PonTree& tree, std::string_view ont_id) {
    const auto* ont = tree.find_node(ont_id);
    if (!ont || ont->kind != NodeKind::Ont) throw Error(ErrorCode::UnknownOnt, "no ONT '" + std::string(ont_id) + "'");
    return path_to_node(tree, ont_id);
}

PathDescriptor path_to_node(const PonTree& tree, std::string_view ont_id) {
    if (!tree.find_node(ont_id)) throw Error(ErrorCode::InvalidArgument, "no node '" + std::string(ont_id) + "'");

    const Graph graph(tree);
    const auto root = root_index(tree, graph);
    if (!root) throw Error(ErrorCode::DisconnectedOnt, "tree has no unique OLT root");

    std::vector<bool> reached;
    const auto parent = bfs_parents(graph, *root, reached);
    const auto target = *graph.index_of(ont_id);
    if (!reached[target])
        throw Error(ErrorCode::DisconnectedOnt, "node '" + std::string(ont_id) + "' is not connected to the OLT");
    return build_path(tree, parent, *root, target);
}

std::vector<PathDescriptor> ont_paths(const PonTree& tree) {
    const Graph graph(tree);
    const auto root = root_index(tree, graph);
    if (!root) return {};

    std::vector<bool> reached;
    const auto parent = bfs_parents(graph, *root, reached);
    std::vector<PathDescriptor> out;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (reached[i] && tree.nodes[i].kind == NodeKind::Ont) out.push_back(build_path(tree, parent, *root, i));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.ont_id < b.ont_id; });
    return out;
}

int total_split(const PathDescriptor& path) {
    int split = 1;
    for (const auto& s : path.splitters) split *= ports(s.ratio);
    return split;
}

int total_split(const PonTree& tree, std::string_view ont_id) { return total_split(path_to_ont(tree, ont_id)); }

}  // namespace odn
