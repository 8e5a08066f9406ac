#include "odn/planner.hpp"

#include "odn/dimensioning.hpp"
#include "odn/geodesy.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <tuple>

namespace odn::planner {

namespace bg = boost::geometry;
using nlohmann::json;

namespace {

constexpr std::string_view kRuleDirectFeed = "odn.direct-feed";
constexpr std::string_view kRuleOltBoundary = "odn.olt-boundary";
constexpr std::string_view kRuleServiceArea = "odn.service-area";
constexpr std::string_view kRuleReach = "odn.physical-reach";
constexpr std::string_view kRuleDrum = "odn.drum-length";
constexpr std::string_view kRuleSplitterSetting = "odn.splitter-setting";

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

SplitterSetting SplitterSetting::n_level(int levels) {
    if (levels < 1 || levels > 3) throw Error(ErrorCode::InvalidArgument, "n-level setting takes 1 to 3 levels");
    return {Kind::NLevel, levels};
}

int SplitterSetting::max_levels() const {
    switch (kind) {
        case Kind::Centralized: return 1;
        case Kind::Dispersed: return 2;
        case Kind::NLevel: return levels;
    }
    return levels;
}

std::optional<SplitterSetting> splitter_setting_from_string(std::string_view text) {
    const auto t = lower(text);
    if (t == "centralized") return SplitterSetting::centralized();
    if (t == "dispersed") return SplitterSetting::dispersed();
    constexpr std::string_view prefix = "n-level:";
    if (t.size() == prefix.size() + 1 && t.starts_with(prefix)) {
        const int n = t.back() - '0';
        if (n >= 1 && n <= 3) return SplitterSetting::n_level(n);
    }
    return std::nullopt;
}

std::string to_string(const SplitterSetting& s) {
    switch (s.kind) {
        case SplitterSetting::Kind::Centralized: return "centralized";
        case SplitterSetting::Kind::Dispersed: return "dispersed";
        case SplitterSetting::Kind::NLevel: return "n-level:" + std::to_string(s.levels);
    }
    return {};
}

std::string_view to_string(FttxVariant v) {
    switch (v) {
        case FttxVariant::FTTB: return "FTTB";
        case FttxVariant::FTTC: return "FTTC";
        case FttxVariant::FTTH: return "FTTH";
        case FttxVariant::FTTM: return "FTTM";
    }
    return "FTTH";
}

// ---------------------------------------------------------------------------

InsufficientCapacityError::InsufficientCapacityError(int unassigned_tenants, std::vector<std::string> unassigned_points)
    : Error(ErrorCode::InsufficientCapacity,
            std::to_string(unassigned_tenants) + " tenant(s) unassigned across " +
                std::to_string(unassigned_points.size()) + " demand point(s)"),
      unassigned_tenants_(unassigned_tenants),
      unassigned_points_(std::move(unassigned_points)) {}

Assignment assign_fdh_areas(const std::vector<DemandPoint>& demand_points, const std::vector<FdhSite>& fdh_sites) {
    std::set<std::string_view> ids;
    long long total_demand = 0, total_capacity = 0;
    for (const auto& p : demand_points) {
        if (p.tenants < 0) throw Error(ErrorCode::InvalidArgument, "demand point '" + p.id + "' has negative demand");
        if (!ids.insert(p.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate demand point '" + p.id + "'");
        total_demand += p.tenants;
    }
    ids.clear();
    for (const auto& f : fdh_sites) {
        if (f.capacity_tenants < 0)
            throw Error(ErrorCode::InvalidArgument, "FDH '" + f.id + "' has negative capacity");
        if (!ids.insert(f.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate FDH site '" + f.id + "'");
        total_capacity += f.capacity_tenants;
    }

    std::vector<const DemandPoint*> order;
    for (const auto& p : demand_points) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const DemandPoint* a, const DemandPoint* b) {
        if (a->tenants != b->tenants) return a->tenants > b->tenants;
        return a->id < b->id;
    });
    std::vector<const FdhSite*> sites;
    for (const auto& f : fdh_sites) sites.push_back(&f);
    std::sort(sites.begin(), sites.end(), [](const FdhSite* a, const FdhSite* b) { return a->id < b->id; });

    Assignment out;
    for (const auto* f : sites) out.remaining_capacity[f->id] = f->capacity_tenants;

    std::vector<std::string> unassigned;
    long long unassigned_tenants = 0;
    for (const auto* p : order) {
        const FdhSite* best = nullptr;
        double best_km = 0.0;
        for (const auto* f : sites) {
            if (out.remaining_capacity[f->id] < p->tenants) continue;
            const double d = geo::haversine_km(p->position, f->position);
            // sites are id-ordered, so a strict improvement keeps the smallest id on ties
            if (!best || d < best_km - 1e-9) {
                best = f;
                best_km = d;
            }
        }
        if (!best) {
            unassigned.push_back(p->id);
            unassigned_tenants += p->tenants;
            continue;
        }
        out.fdh_of[p->id] = best->id;
        out.remaining_capacity[best->id] -= p->tenants;
    }

    if (total_demand > total_capacity || !unassigned.empty()) {
        std::sort(unassigned.begin(), unassigned.end());
        const long long residual = total_demand > total_capacity ? total_demand - total_capacity : unassigned_tenants;
        throw InsufficientCapacityError(static_cast<int>(residual), std::move(unassigned));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

BgPolygon to_polygon(const std::vector<Coordinate>& ring) {
    BgPolygon poly;
    for (const auto& c : ring) bg::append(poly.outer(), BgPoint(c.lon, c.lat));
    bg::correct(poly);
    return poly;
}

std::optional<std::string> invalid_reason(const std::vector<Coordinate>& ring) {
    if (ring.size() < 4) return "ring needs at least four positions";
    if (!(ring.front() == ring.back())) return "ring is not closed";
    std::string reason;
    if (!bg::is_valid(to_polygon(ring), reason)) return reason;
    return std::nullopt;
}

Violation make(ViolationCode code, Severity sev, std::string subject, std::string message, std::string_view rule) {
    return Violation{code, sev, std::move(subject), std::move(message), std::string(rule)};
}

std::string km_text(double km) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", km);
    return buf;
}

}  // namespace

std::vector<Violation> check_rules(const geo::PlanDocument& plan, const RuleOptions& options) {
    std::vector<Violation> out;

    std::optional<SplitterSetting> setting = options.setting;
    if (!setting && plan.metadata.is_object()) {
        if (auto it = plan.metadata.find("splitter_setting"); it != plan.metadata.end() && it->is_string())
            setting = splitter_setting_from_string(it->get<std::string>());
    }

    for (const auto& tree : plan.trees) {
        const auto* olt = root_olt(tree);
        if (!olt) continue;
        std::vector<PathDescriptor> paths;
        try {
            paths = ont_paths(tree);
        } catch (const Error&) {
            continue;
        }
        const Decimal limit = Decimal::from_int(tree.physical_reach_limit_km);
        for (const auto& path : paths) {
            const auto* ont = tree.find_node(path.ont_id);
            const double direct_km = geo::haversine_km(olt->position, ont->position);
            if (direct_km <= options.direct_feed_radius_km) {
                for (std::size_t i = 1; i + 1 < path.node_ids.size(); ++i) {
                    const auto* via = tree.find_node(path.node_ids[i]);
                    if (via->kind != NodeKind::Fdh && via->kind != NodeKind::Fat) continue;
                    out.push_back(make(ViolationCode::DirectFeedMissed, Severity::Warning, path.ont_id,
                                       "ONT is " + km_text(direct_km) + " km (geodesic) from OLT '" + olt->id +
                                           "' but is fed through " + std::string(to_string(via->kind)) + " '" +
                                           via->id + "'; feed it directly",
                                       kRuleDirectFeed));
                    break;
                }
            }
            if (path.length_km > limit)
                out.push_back(make(ViolationCode::ReachExceeded, Severity::Error, path.ont_id,
                                   "path length " + path.length_km.to_fixed(3) + " km exceeds physical reach of " +
                                       std::to_string(tree.physical_reach_limit_km) + " km",
                                   kRuleReach));
            if (setting && static_cast<int>(path.splitters.size()) > setting->max_levels())
                out.push_back(make(ViolationCode::SplitterLevelExceeded, Severity::Error, path.ont_id,
                                   std::to_string(path.splitters.size()) + " splitter stages on the path; " +
                                       to_string(*setting) + " allows " + std::to_string(setting->max_levels()),
                                   kRuleSplitterSetting));
        }
    }

    std::vector<std::optional<BgPolygon>> boundaries;
    for (const auto& b : plan.olt_boundaries) {
        if (auto why = invalid_reason(b.ring)) {
            out.push_back(make(ViolationCode::InvalidServiceArea, Severity::Error, b.id,
                               "OLT boundary polygon is invalid: " + *why, kRuleOltBoundary));
            boundaries.emplace_back();
        } else {
            boundaries.emplace_back(to_polygon(b.ring));
        }
    }
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        for (std::size_t j = i + 1; j < boundaries.size(); ++j) {
            if (!boundaries[i] || !boundaries[j]) continue;
            BgMultiPolygon shared;
            bg::intersection(*boundaries[i], *boundaries[j], shared);
            if (bg::area(shared) > 0.0) {
                const auto& a = plan.olt_boundaries[i];
                const auto& b = plan.olt_boundaries[j];
                const auto& [first, second] = a.id < b.id ? std::pair{&a, &b} : std::pair{&b, &a};
                out.push_back(make(ViolationCode::OltOverlap, Severity::Error, first->id,
                                   "boundary of OLT '" + first->olt_id + "' overlaps boundary '" + second->id +
                                       "' of OLT '" + second->olt_id + "'",
                                   kRuleOltBoundary));
            }
        }
    }

    for (const auto& a : plan.service_areas) {
        if (auto why = invalid_reason(a.ring))
            out.push_back(make(ViolationCode::InvalidServiceArea, Severity::Error, a.id,
                               "service area polygon is invalid: " + *why, kRuleServiceArea));
    }

    for (const auto& s : plan.segments) {
        Decimal km;
        try {
            km = s.effective_length_km();
        } catch (const Error&) {
            continue;
        }
        if (km > options.drum_length_km)
            out.push_back(make(ViolationCode::DrumLengthWarning, Severity::Warning, s.id,
                               "segment is " + km.to_fixed(3) + " km, longer than the " +
                                   options.drum_length_km.to_string() + " km cable drum; expect a joint",
                               kRuleDrum));
    }

    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.subject_id, a.code, a.message) < std::tie(b.subject_id, b.code, b.message);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Violation& a, const Violation& b) {
                              return a.subject_id == b.subject_id && a.code == b.code && a.message == b.message;
                          }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::set<std::string> inner_nodes(const PathDescriptor& p) {
    std::set<std::string> out;
    for (std::size_t i = 1; i + 1 < p.node_ids.size(); ++i) out.insert(p.node_ids[i]);
    return out;
}

// Checks the route chains from `from` to `to` and is disjoint from the primary
// path between the same two nodes.
void check_route(const PonTree& tree, const Route& route, const std::string& from, const std::string& to,
                 const std::vector<std::string>& primary_segments, const std::set<std::string>& primary_inner) {
    if (route.segments.empty())
        throw Error(ErrorCode::MissingAlternateRoute, "alternate route to '" + to + "' has no segments");
    std::string at = from;
    std::set<std::string> visited{from};
    for (const auto& seg : route.segments) {
        if (std::find(primary_segments.begin(), primary_segments.end(), seg.id) != primary_segments.end())
            throw Error(ErrorCode::RoutesNotDisjoint,
                        "alternate route to '" + to + "' reuses primary segment '" + seg.id + "'");
        if (tree.find_segment(seg.id))
            throw Error(ErrorCode::RoutesNotDisjoint,
                        "alternate route to '" + to + "' reuses segment id '" + seg.id + "' already in the tree");
        std::string next;
        if (seg.from_node == at)
            next = seg.to_node;
        else if (seg.to_node == at)
            next = seg.from_node;
        else
            throw Error(ErrorCode::InvalidArgument, "alternate route to '" + to + "' is not a chain at segment '" +
                                                        seg.id + "'");
        if (next != to && primary_inner.count(next))
            throw Error(ErrorCode::RoutesNotDisjoint,
                        "alternate route to '" + to + "' passes through primary node '" + next + "'");
        if (!visited.insert(next).second)
            throw Error(ErrorCode::InvalidArgument, "alternate route to '" + to + "' revisits node '" + next + "'");
        if (!tree.find_node(next)) {
            auto it = std::find_if(route.nodes.begin(), route.nodes.end(),
                                   [&](const OdnNode& n) { return n.id == next; });
            if (it == route.nodes.end())
                throw Error(ErrorCode::InvalidArgument,
                            "alternate route to '" + to + "' uses undeclared node '" + next + "'");
        }
        at = next;
    }
    if (at != to)
        throw Error(ErrorCode::InvalidArgument, "alternate route ends at '" + at + "' instead of '" + to + "'");
}

void add_route(PonTree& tree, const Route& route, CableRole role) {
    for (const auto& n : route.nodes) {
        if (!tree.find_node(n.id)) tree.nodes.push_back(n);
    }
    for (auto seg : route.segments) {
        seg.standby = true;
        seg.role = role;
        tree.segments.push_back(std::move(seg));
    }
}

}  // namespace

PonTree apply_protection(const PonTree& tree, ProtectionType type, const AlternateRoutes& routes) {
    if (type == ProtectionType::TypeA) return tree;

    const auto* olt = root_olt(tree);
    if (!olt) throw Error(ErrorCode::InvalidPlan, "tree '" + tree.root_port + "' has no unique OLT root");

    // Feeder targets: FDHs hosting a splitter, else the first splitter stage below the OLT.
    std::vector<std::string> targets;
    for (const auto& sp : tree.splitters) {
        const auto* n = tree.find_node(sp.node_id);
        if (n && n->kind == NodeKind::Fdh) targets.push_back(sp.node_id);
    }
    if (targets.empty()) {
        int min_level = 4;
        for (const auto& sp : tree.splitters)
            if (sp.node_id != olt->id) min_level = std::min(min_level, sp.level);
        for (const auto& sp : tree.splitters)
            if (sp.node_id != olt->id && sp.level == min_level) targets.push_back(sp.node_id);
    }
    if (targets.empty())
        throw Error(ErrorCode::InvalidArgument, "tree '" + tree.root_port + "' has no splitter below the OLT to protect");
    std::sort(targets.begin(), targets.end());

    PonTree out = tree;
    for (const auto& target : targets) {
        auto it = routes.feeder.find(target);
        if (it == routes.feeder.end())
            throw Error(ErrorCode::MissingAlternateRoute, "no alternate feeder route for '" + target + "'");
        const auto primary = path_to_node(tree, target);
        check_route(out, it->second, olt->id, target, primary.segment_ids, inner_nodes(primary));
        add_route(out, it->second, CableRole::Feeder);
    }

    if (type == ProtectionType::TypeC) {
        std::set<std::string> downstream;
        for (const auto& path : ont_paths(tree)) {
            for (const auto& id : path.node_ids) {
                const auto* n = tree.find_node(id);
                if (n->kind == NodeKind::Fat || n->kind == NodeKind::JointBox || n->kind == NodeKind::MicroOdf)
                    downstream.insert(id);
            }
        }
        for (const auto& node : downstream) {
            auto it = routes.distribution.find(node);
            if (it == routes.distribution.end())
                throw Error(ErrorCode::MissingAlternateRoute, "no alternate distribution route for '" + node + "'");
            const auto primary = path_to_node(tree, node);
            // the mirrored run starts at the nearest splitter upstream of the node
            std::size_t start = 0;
            for (std::size_t i = 0; i + 1 < primary.node_ids.size(); ++i)
                if (tree.splitter_at(primary.node_ids[i])) start = i;
            if (!tree.splitter_at(primary.node_ids[start]) || start == 0)
                throw Error(ErrorCode::InvalidArgument, "no splitter upstream of '" + node + "' below the OLT");
            PathDescriptor sub;
            sub.node_ids.assign(primary.node_ids.begin() + static_cast<std::ptrdiff_t>(start), primary.node_ids.end());
            sub.segment_ids.assign(primary.segment_ids.begin() + static_cast<std::ptrdiff_t>(start),
                                   primary.segment_ids.end());
            check_route(out, it->second, primary.node_ids[start], node, sub.segment_ids, inner_nodes(sub));
            add_route(out, it->second, CableRole::Distribution);
        }
    }

    for (auto& sp : out.splitters) {
        if (sp.node_id == olt->id) continue;
        const bool target = std::binary_search(targets.begin(), targets.end(), sp.node_id);
        if (target || type == ProtectionType::TypeC) sp.input_ports = 2;
    }
    out.protection = type;

    std::vector<Violation> errors;
    for (auto& v : validate_topology(out))
        if (v.severity == Severity::Error) errors.push_back(std::move(v));
    if (!errors.empty())
        throw Error(ErrorCode::InvalidPlan, "protected tree does not validate: " + std::string(to_string(errors[0].code)) +
                                                " at '" + errors[0].subject_id + "'");
    return out;
}

// ---------------------------------------------------------------------------

FttxVariant classify_fttx(const PonTree& tree, std::string_view ont_id) {
    const auto* ont = tree.find_node(ont_id);
    if (!ont || ont->kind != NodeKind::Ont) throw Error(ErrorCode::UnknownOnt, "no ONT '" + std::string(ont_id) + "'");
    if (!ont->terminal) return FttxVariant::FTTH;
    const auto t = lower(*ont->terminal);
    auto has = [&](std::initializer_list<std::string_view> words) {
        return std::any_of(words.begin(), words.end(), [&](std::string_view w) { return t.find(w) != std::string::npos; });
    };
    if (has({"bts", "mobile", "tower", "cell"})) return FttxVariant::FTTM;
    if (has({"curb", "kerb", "cabinet", "street"})) return FttxVariant::FTTC;
    if (has({"building", "riser", "mdu", "basement"})) return FttxVariant::FTTB;
    return FttxVariant::FTTH;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::VillasOutdoorFdh: return "villas-outdoor-fdh";
        case ScenarioKind::HighRiseIndoorFdh: return "high-rise-indoor-fdh";
        case ScenarioKind::SmallBuildingWallFdh: return "small-building-wall-fdh";
        case ScenarioKind::SmallBuildingOutdoorFdh: return "small-building-outdoor-fdh";
    }
    return {};
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view text) {
    for (auto k : {ScenarioKind::VillasOutdoorFdh, ScenarioKind::HighRiseIndoorFdh, ScenarioKind::SmallBuildingWallFdh,
                   ScenarioKind::SmallBuildingOutdoorFdh})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

ScenarioParams scenario_defaults(ScenarioKind kind) {
    ScenarioParams p;
    switch (kind) {
        case ScenarioKind::VillasOutdoorFdh: break;
        case ScenarioKind::HighRiseIndoorFdh:
            p.tenants = 64;
            p.split_ratios = {2, 32};
            break;
        case ScenarioKind::SmallBuildingWallFdh:
        case ScenarioKind::SmallBuildingOutdoorFdh:
            p.tenants = 16;
            p.split_ratios = {16};
            break;
    }
    return p;
}

namespace {

// One stage below the OLT. A splitter stage owns the next ratio; a collector
// groups up to `group` children per instance (0 means a single instance).
struct Stage {
    NodeKind kind;
    bool splitter = false;
    int group = 0;
};

struct Layout {
    bool olt_splitter = false;
    std::vector<Stage> stages;
    std::string terminal;
    int drop_splices = 0;
    int drop_connectors = 0;
};

Layout layout_for(ScenarioKind kind, std::size_t levels) {
    Layout l;
    l.olt_splitter = levels >= 2;
    const bool three = levels == 3;
    switch (kind) {
        case ScenarioKind::VillasOutdoorFdh:
            l.stages.push_back({NodeKind::Fdh, true});
            if (three) l.stages.push_back({NodeKind::Fat, true});
            l.stages.push_back({NodeKind::JointBox, false, 8});
            l.terminal = "villa";
            l.drop_splices = 1;
            l.drop_connectors = 1;
            break;
        case ScenarioKind::HighRiseIndoorFdh:
            if (levels == 1) {
                l.stages.push_back({NodeKind::Fdh, true});
                l.stages.push_back({NodeKind::MicroOdf, false, 8});
            } else {
                l.stages.push_back({NodeKind::Fdh, three});
                l.stages.push_back({NodeKind::MicroOdf, true});
            }
            l.terminal = "apartment";
            l.drop_connectors = 2;
            break;
        case ScenarioKind::SmallBuildingWallFdh:
            l.stages.push_back({NodeKind::Fdh, true});
            if (three) l.stages.push_back({NodeKind::JointBox, true});
            l.terminal = "flat";
            l.drop_connectors = 2;
            break;
        case ScenarioKind::SmallBuildingOutdoorFdh:
            l.stages.push_back({NodeKind::Fdh, true});
            if (three) l.stages.push_back({NodeKind::Fat, true});
            l.stages.push_back({NodeKind::JointBox, false, 0});
            l.terminal = "flat";
            l.drop_connectors = 2;
            break;
    }
    return l;
}

std::string_view id_prefix(NodeKind k) {
    switch (k) {
        case NodeKind::CentralOfficeOlt: return "olt";
        case NodeKind::Fdh: return "fdh";
        case NodeKind::Fat: return "fat";
        case NodeKind::JointBox: return "jb";
        case NodeKind::MicroOdf: return "modf";
        case NodeKind::Manhole: return "mh";
        case NodeKind::Handhole: return "hh";
        case NodeKind::Ont: return "ont";
    }
    return "node";
}

json point(const Coordinate& c) { return {{"type", "Point"}, {"coordinates", {c.lon, c.lat}}}; }

json line(const Coordinate& a, const Coordinate& b) {
    return {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}};
}

json square(const Coordinate& centre, double half_km) {
    const double dlat = half_km / 111.195;
    const double dlon = half_km / (111.195 * std::cos(centre.lat * std::numbers::pi / 180.0));
    const double w = centre.lon - dlon, e = centre.lon + dlon, s = centre.lat - dlat, n = centre.lat + dlat;
    return {{"type", "Polygon"}, {"coordinates", {{{w, s}, {e, s}, {e, n}, {w, n}, {w, s}}}}};
}

json feature(json geometry, json odn) {
    return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", {{"odn", std::move(odn)}}}};
}

double number(Decimal d) { return std::stod(d.to_string()); }

class TemplateBuilder {
public:
    TemplateBuilder(ScenarioKind kind, const ScenarioParams& params, Layout layout)
        : kind_(kind), params_(params), layout_(std::move(layout)) {}

    geo::PlanDocument build() {
        olt_ = add_node(NodeKind::CentralOfficeOlt, params_.origin);
        std::size_t ratio_index = 0;
        json olt_extra = {{"reach_km", params_.reach_limit_km}};
        if (layout_.olt_splitter) olt_extra["splitter"] = splitter_json(ratio_index++);
        node_extra_[olt_.id] = std::move(olt_extra);

        capacity_.assign(layout_.stages.size() + 1, 1);
        for (std::size_t i = layout_.stages.size(); i-- > 0;) {
            capacity_[i] = capacity_[i + 1];
            if (layout_.stages[i].splitter) capacity_[i] *= params_.split_ratios[splitter_ratio_index(i)];
        }

        expand(olt_, 90.0, 0, 0, params_.tenants);
        emit_node(olt_, node_extra_[olt_.id]);

        std::map<std::string, json> layers;
        layers[std::string(geo::layer::kEquipment)] = collection(equipment_);
        layers[std::string(geo::layer::kStructures)] = collection(structures_);
        layers[std::string(geo::layer::kFeederCables)] = collection(feeder_);
        layers[std::string(geo::layer::kDistributionCables)] = collection(distribution_);
        layers[std::string(geo::layer::kDropCables)] = collection(drops_);

        const double span_km = params_.feeder_km.to_double() +
                               static_cast<double>(layout_.stages.size()) * params_.distribution_km.to_double() +
                               params_.drop_km.to_double() + 0.5;
        layers[std::string(geo::layer::kOltBoundaries)] =
            collection({feature(square(params_.origin, span_km), {{"id", "olt-area-001"}, {"olt", olt_.id}})});
        json areas = json::array();
        for (const auto& [fdh, info] : fdh_areas_) {
            areas.push_back(feature(
                square(info.first, params_.distribution_km.to_double() + params_.drop_km.to_double()),
                {{"id", "sa-" + fdh}, {"demand_tenants", info.second}, {"assigned_fdh", fdh}}));
        }
        layers[std::string(geo::layer::kServiceAreas)] = collection(std::move(areas));

        const auto levels = params_.split_ratios.size();
        json metadata = {
            {"scenario", std::string(to_string(kind_))},
            {"tenants", params_.tenants},
            {"splitter_setting", levels == 1 ? std::string("centralized") : "n-level:" + std::to_string(levels)}};
        return geo::assemble_plan(std::move(layers), std::move(metadata));
    }

private:
    struct Built {
        std::string id;
        Coordinate position;
    };

    static json collection(json features) {
        return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    }

    // Index into split_ratios of the splitter at stage i.
    std::size_t splitter_ratio_index(std::size_t stage) const {
        std::size_t idx = layout_.olt_splitter ? 1 : 0;
        for (std::size_t i = 0; i < stage; ++i) idx += layout_.stages[i].splitter ? 1 : 0;
        return idx;
    }

    json splitter_json(std::size_t ratio_index) const {
        return {{"output_ports", params_.split_ratios[ratio_index]},
                {"input_ports", 1},
                {"level", static_cast<int>(ratio_index) + 1}};
    }

    Built add_node(NodeKind kind, const Coordinate& at) {
        const auto n = ++counters_[kind];
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s-%03d", std::string(id_prefix(kind)).c_str(), n);
        Built b{buf, at};
        kinds_[b.id] = kind;
        return b;
    }

    void emit_node(const Built& b, const json& extra) {
        const auto kind = kinds_.at(b.id);
        json odn = {{"id", b.id}, {"kind", std::string(to_string(kind))}};
        for (auto& [k, v] : extra.items()) odn[k] = v;
        if (kind == NodeKind::Ont) odn["terminal"] = layout_.terminal;
        (is_equipment(kind) ? equipment_ : structures_).push_back(feature(point(b.position), std::move(odn)));
    }

    // Splits a run into drum-length sections joined at manholes (feeder) or
    // handholes (distribution), one splice per section.
    void run(const Built& from, const Built& to, double bearing, CableRole role, Decimal km, int fibers) {
        const auto sections = std::max<std::int64_t>(
            1, (km.raw() + params_.drum_length_km.raw() - 1) / params_.drum_length_km.raw());
        const auto base = km.raw() / sections;
        Built at = from;
        for (std::int64_t s = 0; s < sections; ++s) {
            const bool last = s + 1 == sections;
            const auto piece = Decimal::from_raw(last ? km.raw() - base * (sections - 1) : base);
            Built next = to;
            if (!last) {
                const double along = Decimal::from_raw(base * (s + 1)).to_double();
                next = add_node(role == CableRole::Feeder ? NodeKind::Manhole : NodeKind::Handhole,
                                geo::destination(from.position, bearing, along));
                emit_node(next, json::object());
            }
            int connectors = 0;
            if (role == CableRole::Feeder) connectors = (s == 0 ? 1 : 0) + (last ? 1 : 0);
            add_segment(at, next, role, piece, fibers, 1, connectors);
            at = next;
        }
    }

    void add_segment(const Built& a, const Built& b, CableRole role, Decimal km, int fibers, int splices,
                     int connectors) {
        const char* prefix = role == CableRole::Feeder ? "fc" : role == CableRole::Distribution ? "dc" : "drop";
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s-%03d", prefix, ++segment_counter_[role]);
        json odn = {{"id", buf},         {"from", a.id},           {"to", b.id},
                    {"fiber_count", fibers}, {"length_km", number(km)}, {"splices", splices},
                    {"connectors", connectors}, {"pon_port", "pon-1"}};
        auto f = feature(line(a.position, b.position), std::move(odn));
        (role == CableRole::Feeder ? feeder_ : role == CableRole::Distribution ? distribution_ : drops_)
            .push_back(std::move(f));
    }

    static double fan(std::size_t j, std::size_t m) {
        if (m <= 1) return 0.0;
        const double step = std::min(20.0, 150.0 / static_cast<double>(m - 1));
        return (static_cast<double>(j) - static_cast<double>(m - 1) / 2.0) * step;
    }

    // Emits the children of `parent` (already placed, not yet emitted) that
    // serve ONTs [lo, hi) starting at stage `stage`; returns the number of
    // distinct fibres the parent's uplink must carry.
    int expand(const Built& parent, double bearing, std::size_t stage, int lo, int hi) {
        const int n = hi - lo;
        struct Child {
            int lo, hi;
        };
        std::vector<Child> chunks;
        NodeKind kind = NodeKind::Ont;
        if (stage == layout_.stages.size()) {
            for (int i = lo; i < hi; ++i) chunks.push_back({i, i + 1});
        } else {
            const auto& st = layout_.stages[stage];
            kind = st.kind;
            const int size = st.splitter ? capacity_[stage] : (st.group > 0 ? st.group : n);
            for (int i = lo; i < hi; i += size) chunks.push_back({i, std::min(hi, i + size)});
        }

        int demand = 0;
        for (std::size_t j = 0; j < chunks.size(); ++j) {
            const double b = bearing + fan(j, chunks.size());
            const Decimal km = kind == NodeKind::Ont ? params_.drop_km
                               : stage == 0          ? params_.feeder_km
                                                     : params_.distribution_km;
            const auto child = add_node(kind, geo::destination(parent.position, b, km.to_double()));
            json extra = json::object();
            int below = 1;
            if (kind != NodeKind::Ont) {
                const auto& st = layout_.stages[stage];
                if (st.splitter) {
                    extra["splitter"] = splitter_json(splitter_ratio_index(stage));
                    node_extra_[child.id] = extra;
                }
                below = expand(child, b, stage + 1, chunks[j].lo, chunks[j].hi);
                if (st.splitter) below = 1;
                if (kind == NodeKind::Fdh) fdh_areas_[child.id] = {child.position, chunks[j].hi - chunks[j].lo};
            }
            emit_node(child, extra);
            if (kind == NodeKind::Ont) {
                add_segment(parent, child, CableRole::Drop, km, 2, layout_.drop_splices, layout_.drop_connectors);
            } else {
                const int fibers = dimensioning::cable_size(below).total_fibers();
                run(parent, child, b, stage == 0 ? CableRole::Feeder : CableRole::Distribution, km, fibers);
            }
            demand += below;
        }
        return demand;
    }

    ScenarioKind kind_;
    const ScenarioParams& params_;
    Layout layout_;
    Built olt_;
    std::vector<int> capacity_;
    std::map<NodeKind, int> counters_;
    std::map<CableRole, int> segment_counter_;
    std::map<std::string, NodeKind> kinds_;
    std::map<std::string, json> node_extra_;
    std::map<std::string, std::pair<Coordinate, int>> fdh_areas_;
    json equipment_ = json::array();
    json structures_ = json::array();
    json feeder_ = json::array();
    json distribution_ = json::array();
    json drops_ = json::array();
};

}  // namespace

geo::PlanDocument scenario_template(ScenarioKind kind, const ScenarioParams& params) {
    auto invalid = [](const std::string& why) { return Error(ErrorCode::InvalidParams, why); };
    const auto levels = params.split_ratios.size();
    if (levels < 1 || levels > 3) throw invalid("between one and three split ratios are required");
    long long product = 1;
    for (int r : params.split_ratios) {
        if (!split_ratio_from_int(r)) throw invalid("split ratio 1:" + std::to_string(r) + " is not supported");
        product *= r;
    }
    if (product > 64) throw invalid("total split " + std::to_string(product) + " exceeds 64");
    if (params.tenants < 1) throw invalid("tenant count must be at least 1");
    if (params.tenants > product)
        throw invalid(std::to_string(params.tenants) + " tenants exceed the total split of " + std::to_string(product));
    const Decimal zero;
    if (params.feeder_km <= zero || params.distribution_km <= zero || params.drop_km <= zero)
        throw invalid("feeder, distribution and drop lengths must be positive");
    if (params.drum_length_km <= zero) throw invalid("drum length must be positive");
    if (params.drop_km > params.drum_length_km) throw invalid("drop length exceeds the drum length");
    if (params.reach_limit_km != 10 && params.reach_limit_km != 20) throw invalid("reach limit must be 10 or 20 km");
    if (!is_valid_wgs84(params.origin)) throw invalid("origin is not a WGS84 position");

    const auto layout = layout_for(kind, levels);
    const Decimal path_km =
        params.feeder_km + params.distribution_km * static_cast<std::int64_t>(layout.stages.size() - 1) + params.drop_km;
    if (path_km > Decimal::from_int(params.reach_limit_km))
        throw invalid("path of " + path_km.to_string() + " km exceeds the " + std::to_string(params.reach_limit_km) +
                      " km reach limit");

    auto plan = TemplateBuilder(kind, params, layout).build();
    for (const auto& tree : plan.trees) {
        const auto found = validate_topology(tree);
        if (!found.empty())
            throw invalid("template does not validate: " + std::string(odn::to_string(found.front().code)) + " at '" +
                          found.front().subject_id + "'");
    }
    return plan;
}

// ---------------------------------------------------------------------------

void annotate_budget(geo::PlanDocument& plan, const budget::LossModel& model,
                     const budget::BudgetThresholds& thresholds) {
    std::map<std::string, budget::PathLossBreakdown> worst;
    for (const auto& tree : plan.trees) {
        std::vector<PathDescriptor> paths;
        try {
            paths = ont_paths(tree);
        } catch (const Error&) {
            continue;
        }
        for (const auto& p : paths) {
            const auto loss = budget::path_loss(p, model);
            auto [it, fresh] = worst.emplace(p.ont_id, loss);
            if (!fresh && loss.total_db > it->second.total_db) it->second = loss;
        }
    }
    auto& equipment = plan.layers[std::string(geo::layer::kEquipment)];
    if (!equipment.is_object() || !equipment.contains("features")) return;
    for (auto& f : equipment["features"]) {
        auto props = f.find("properties");
        if (props == f.end() || !props->is_object()) continue;
        auto odn = props->find("odn");
        if (odn == props->end() || !odn->is_object() || odn->value("kind", "") != "ont") continue;
        auto it = worst.find(odn->value("id", ""));
        if (it == worst.end()) continue;
        const auto total = it->second.total_db;
        const auto cls = budget::classify_budget(total, thresholds);
        json b = {{"total_db", number(total)},
                  {"classification", std::string(budget::to_string(cls))},
                  {"attenuator_db", nullptr},
                  {"model", model.name}};
        if (cls == budget::BudgetClass::NeedsAttenuator) b["attenuator_db"] = number(budget::attenuator_value(total, thresholds));
        (*props)["budget"] = std::move(b);
    }
}

}  // namespace odn::planner
