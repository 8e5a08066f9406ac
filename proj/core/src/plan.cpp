#include "odn/plan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace odn::geo {

using nlohmann::json;

namespace {

struct SplitterEntry {
    SplitterSpec spec;
    std::optional<std::string> pon_port;
};

class Loader {
public:
    std::vector<Diagnostic> diagnostics;

    void fail(ErrorCode code, std::string_view layer, std::string_view id, std::string message) {
        diagnostics.push_back(Diagnostic{code, std::string(layer), std::string(id), std::move(message)});
    }
};

CableRole role_for_layer(std::string_view name) {
    if (name == layer::kFeederCables) return CableRole::Feeder;
    if (name == layer::kDistributionCables) return CableRole::Distribution;
    return CableRole::Drop;
}

std::string feature_key(const json& f) {
    if (!f.is_object()) return {};
    if (auto p = f.find("properties"); p != f.end() && p->is_object()) {
        if (auto o = p->find("odn"); o != p->end() && o->is_object()) {
            if (auto id = o->find("id"); id != o->end() && id->is_string()) return id->get<std::string>();
        }
    }
    if (auto id = f.find("id"); id != f.end()) {
        if (id->is_string()) return id->get<std::string>();
        if (id->is_number()) return id->dump();
    }
    if (auto p = f.find("properties"); p != f.end() && p->is_object()) {
        if (auto id = p->find("id"); id != p->end() && id->is_string()) return id->get<std::string>();
    }
    return {};
}

void round_numbers(json& j) {
    if (j.is_array()) {
        for (auto& e : j) round_numbers(e);
    } else if (j.is_number_float()) {
        j = round_coordinate(j.get<double>());
    }
}

void round_geometry(json& geometry) {
    if (!geometry.is_object()) return;
    if (auto c = geometry.find("coordinates"); c != geometry.end()) round_numbers(*c);
    if (auto g = geometry.find("geometries"); g != geometry.end() && g->is_array()) {
        for (auto& sub : *g) round_geometry(sub);
    }
}

json normalize_layer(const std::string& name, json fc, Loader& loader) {
    if (!is_required_layer(name)) return fc;
    if (fc.is_null()) return json{{"type", "FeatureCollection"}, {"features", json::array()}};
    if (!fc.is_object() || fc.value("type", "") != "FeatureCollection" || !fc.contains("features") ||
        !fc["features"].is_array()) {
        loader.fail(ErrorCode::SchemaError, name, "", "layer is not a GeoJSON FeatureCollection");
        return json{{"type", "FeatureCollection"}, {"features", json::array()}};
    }
    auto& features = fc["features"];
    for (auto& f : features) {
        if (!f.is_object() || f.value("type", "") != "Feature") {
            loader.fail(ErrorCode::SchemaError, name, feature_key(f), "entry is not a GeoJSON Feature");
            continue;
        }
        if (auto g = f.find("geometry"); g != f.end()) round_geometry(*g);
    }
    std::stable_sort(features.begin(), features.end(),
                     [](const json& a, const json& b) { return feature_key(a) < feature_key(b); });
    return fc;
}

std::string geometry_type(const json& f) {
    auto g = f.find("geometry");
    if (g == f.end() || g->is_null()) return "null";
    return g->value("type", "");
}

std::optional<Coordinate> read_position(const json& c) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) return std::nullopt;
    return Coordinate{c[0].get<double>(), c[1].get<double>()};
}

std::vector<Coordinate> read_line(const json& coords) {
    std::vector<Coordinate> out;
    if (!coords.is_array()) return out;
    for (const auto& c : coords) {
        if (auto p = read_position(c)) out.push_back(*p);
    }
    return out;
}

const json* odn_props(const json& f) {
    auto p = f.find("properties");
    if (p == f.end() || !p->is_object()) return nullptr;
    auto o = p->find("odn");
    if (o == p->end() || !o->is_object()) return nullptr;
    return &*o;
}

std::optional<std::string> opt_string(const json& o, const char* key) {
    auto it = o.find(key);
    if (it == o.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    return it->dump();
}

std::optional<Decimal> opt_decimal(const json& o, const char* key) {
    auto it = o.find(key);
    if (it == o.end() || it->is_null()) return std::nullopt;
    if (it->is_number()) return Decimal::from_double(it->get<double>());
    if (it->is_string()) return Decimal::parse(it->get<std::string>());
    throw std::invalid_argument(std::string("'") + key + "' is not numeric");
}

int int_or(const json& o, const char* key, int fallback) {
    auto it = o.find(key);
    if (it == o.end() || it->is_null()) return fallback;
    if (!it->is_number_integer()) throw std::invalid_argument(std::string("'") + key + "' must be an integer");
    return it->get<int>();
}

bool bool_or(const json& o, const char* key, bool fallback) {
    auto it = o.find(key);
    if (it == o.end() || it->is_null()) return fallback;
    if (!it->is_boolean()) throw std::invalid_argument(std::string("'") + key + "' must be a boolean");
    return it->get<bool>();
}

std::vector<Coordinate> read_polygon_ring(const json& f) {
    const auto& g = f["geometry"];
    if (!g.contains("coordinates") || !g["coordinates"].is_array() || g["coordinates"].empty()) return {};
    return read_line(g["coordinates"][0]);
}

json default_metadata() { return json{{"projection", "EPSG:4326"}, {"version", "1"}, {"author", ""}}; }

std::string layer_file_name(const std::string& name) {
    std::string out;
    for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    return out + ".geojson";
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, "'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

bool is_required_layer(std::string_view name) {
    return std::find(kRequiredLayers.begin(), kRequiredLayers.end(), name) != kRequiredLayers.end();
}

const OdnNode* PlanDocument::find_node(std::string_view id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const OdnNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

PlanLoadError::PlanLoadError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? ErrorCode::SchemaError : diagnostics.front().code,
            [&] {
                std::ostringstream os;
                os << diagnostics.size() << " problem(s) in plan";
                if (!diagnostics.empty()) {
                    const auto& d = diagnostics.front();
                    os << "; first: [" << d.layer << (d.feature_id.empty() ? "" : "/" + d.feature_id) << "] "
                       << d.message;
                }
                return os.str();
            }()),
      diagnostics_(std::move(diagnostics)) {}

PlanDocument assemble_plan(std::map<std::string, json> layers, json metadata) {
    Loader loader;
    PlanDocument plan;

    plan.metadata = default_metadata();
    if (metadata.is_object()) {
        for (auto& [k, v] : metadata.items()) plan.metadata[k] = v;
    } else if (!metadata.is_null()) {
        loader.fail(ErrorCode::SchemaError, "metadata", "", "metadata must be an object");
    }

    for (auto name : kRequiredLayers) layers.try_emplace(std::string(name), nullptr);
    for (auto& [name, fc] : layers) plan.layers[name] = normalize_layer(name, std::move(fc), loader);

    std::map<std::string, std::vector<SplitterEntry>> splitters_at;
    std::map<std::string, int> reach_at;
    std::set<std::string> node_ids;

    for (auto layer_name : {layer::kEquipment, layer::kStructures}) {
        const std::string lname(layer_name);
        for (const auto& f : plan.layers[lname]["features"]) {
            if (!f.is_object()) continue;
            const auto key = feature_key(f);
            const json* odn = odn_props(f);
            if (!odn) {
                loader.fail(ErrorCode::SchemaError, lname, key, "feature has no 'odn' property object");
                continue;
            }
            try {
                OdnNode node;
                auto id = opt_string(*odn, "id");
                auto kind_text = opt_string(*odn, "kind");
                if (!id || id->empty()) {
                    loader.fail(ErrorCode::SchemaError, lname, key, "missing required property 'odn.id'");
                    continue;
                }
                node.id = *id;
                if (!kind_text) {
                    loader.fail(ErrorCode::SchemaError, lname, node.id, "missing required property 'odn.kind'");
                    continue;
                }
                auto kind = node_kind_from_string(*kind_text);
                if (!kind) {
                    loader.fail(ErrorCode::SchemaError, lname, node.id, "unknown node kind '" + *kind_text + "'");
                    continue;
                }
                node.kind = *kind;
                if (is_equipment(node.kind) != (layer_name == layer::kEquipment)) {
                    loader.fail(ErrorCode::SchemaError, lname, node.id,
                                "kind '" + *kind_text + "' does not belong in layer '" + lname + "'");
                    continue;
                }
                if (geometry_type(f) != "Point") {
                    loader.fail(ErrorCode::GeometryTypeMismatch, lname, node.id,
                                "node feature needs Point geometry, got " + geometry_type(f));
                    continue;
                }
                auto pos = read_position(f["geometry"].value("coordinates", json()));
                if (!pos) {
                    loader.fail(ErrorCode::SchemaError, lname, node.id, "Point has no usable coordinates");
                    continue;
                }
                node.position = *pos;
                node.label = opt_string(*odn, "label");
                node.terminal = opt_string(*odn, "terminal");
                if (!node_ids.insert(node.id).second) {
                    loader.fail(ErrorCode::SchemaError, lname, node.id, "duplicate node id");
                    continue;
                }
                if (node.kind == NodeKind::CentralOfficeOlt) reach_at[node.id] = int_or(*odn, "reach_km", 20);

                std::vector<json> entries;
                if (auto s = odn->find("splitter"); s != odn->end() && !s->is_null()) entries.push_back(*s);
                if (auto s = odn->find("splitters"); s != odn->end() && s->is_array())
                    for (const auto& e : *s) entries.push_back(e);
                for (const auto& e : entries) {
                    if (!e.is_object()) {
                        loader.fail(ErrorCode::SchemaError, lname, node.id, "splitter entry must be an object");
                        continue;
                    }
                    const int out_ports = int_or(e, "output_ports", 0);
                    auto ratio = split_ratio_from_int(out_ports);
                    if (!ratio) {
                        loader.fail(ErrorCode::SchemaError, lname, node.id,
                                    "splitter output_ports must be one of 2, 4, 8, 16, 32, 64");
                        continue;
                    }
                    SplitterEntry entry;
                    entry.spec = SplitterSpec{node.id, int_or(e, "input_ports", 1), *ratio, int_or(e, "level", 1)};
                    entry.pon_port = opt_string(e, "pon_port");
                    splitters_at[node.id].push_back(std::move(entry));
                }
                plan.nodes.push_back(std::move(node));
            } catch (const std::exception& e) {
                loader.fail(ErrorCode::SchemaError, lname, key, e.what());
            }
        }
    }

    std::map<std::string, std::vector<std::string>> segment_ports;
    std::set<std::string> segment_ids;
    for (auto layer_name : {layer::kFeederCables, layer::kDistributionCables, layer::kDropCables}) {
        const std::string lname(layer_name);
        for (const auto& f : plan.layers[lname]["features"]) {
            if (!f.is_object()) continue;
            const auto key = feature_key(f);
            const json* odn = odn_props(f);
            if (!odn) {
                loader.fail(ErrorCode::SchemaError, lname, key, "feature has no 'odn' property object");
                continue;
            }
            try {
                FiberSegment seg;
                auto id = opt_string(*odn, "id");
                auto from = opt_string(*odn, "from");
                auto to = opt_string(*odn, "to");
                if (!id || id->empty() || !from || !to) {
                    loader.fail(ErrorCode::SchemaError, lname, key,
                                "missing required property ('odn.id', 'odn.from' and 'odn.to' are required)");
                    continue;
                }
                seg.id = *id;
                seg.from_node = *from;
                seg.to_node = *to;
                seg.role = role_for_layer(layer_name);
                if (auto role = opt_string(*odn, "role")) {
                    auto parsed = cable_role_from_string(*role);
                    if (!parsed || *parsed != seg.role) {
                        loader.fail(ErrorCode::SchemaError, lname, seg.id,
                                    "role '" + *role + "' does not match layer '" + lname + "'");
                        continue;
                    }
                }
                const auto gtype = geometry_type(f);
                if (gtype == "LineString") {
                    seg.geometry = read_line(f["geometry"].value("coordinates", json()));
                } else if (gtype != "null") {
                    loader.fail(ErrorCode::GeometryTypeMismatch, lname, seg.id,
                                "cable feature needs LineString geometry, got " + gtype);
                    continue;
                }
                seg.length_km = opt_decimal(*odn, "length_km");
                if (!seg.length_km && seg.geometry.size() < 2) {
                    loader.fail(ErrorCode::SchemaError, lname, seg.id,
                                "missing required property: 'odn.length_km' or a LineString geometry");
                    continue;
                }
                if (seg.role == CableRole::Drop) {
                    seg.fiber_count = int_or(*odn, "fiber_count", 2);
                } else if (odn->contains("fiber_count")) {
                    seg.fiber_count = int_or(*odn, "fiber_count", 0);
                } else {
                    loader.fail(ErrorCode::SchemaError, lname, seg.id, "missing required property 'odn.fiber_count'");
                    continue;
                }
                seg.splice_count = int_or(*odn, "splices", 0);
                seg.connector_count = int_or(*odn, "connectors", 0);
                seg.nonstandard = bool_or(*odn, "nonstandard", false);
                seg.standby = bool_or(*odn, "standby", false);
                if (!segment_ids.insert(seg.id).second) {
                    loader.fail(ErrorCode::SchemaError, lname, seg.id, "duplicate segment id");
                    continue;
                }
                for (const auto* end : {&seg.from_node, &seg.to_node}) {
                    if (!node_ids.count(*end))
                        loader.fail(ErrorCode::DanglingReference, lname, seg.id,
                                    "segment references unknown node '" + *end + "'");
                }
                auto& ports = segment_ports[seg.id];
                if (auto pp = odn->find("pon_port"); pp != odn->end() && pp->is_array()) {
                    for (const auto& p : *pp) {
                        if (!p.is_string()) throw std::invalid_argument("'pon_port' entries must be strings");
                        ports.push_back(p.get<std::string>());
                    }
                    std::sort(ports.begin(), ports.end());
                    ports.erase(std::unique(ports.begin(), ports.end()), ports.end());
                }
                if (ports.empty()) ports.push_back(opt_string(*odn, "pon_port").value_or(std::string(kDefaultPonPort)));
                plan.segments.push_back(std::move(seg));
            } catch (const std::exception& e) {
                loader.fail(ErrorCode::SchemaError, lname, key, e.what());
            }
        }
    }

    for (const auto& f : plan.layers[std::string(layer::kOltBoundaries)]["features"]) {
        if (!f.is_object()) continue;
        const auto key = feature_key(f);
        const json* odn = odn_props(f);
        if (!odn) {
            loader.fail(ErrorCode::SchemaError, layer::kOltBoundaries, key, "feature has no 'odn' property object");
            continue;
        }
        if (geometry_type(f) != "Polygon") {
            loader.fail(ErrorCode::GeometryTypeMismatch, layer::kOltBoundaries, key,
                        "OLT boundary needs Polygon geometry, got " + geometry_type(f));
            continue;
        }
        OltBoundary b;
        b.id = opt_string(*odn, "id").value_or(key);
        auto olt = opt_string(*odn, "olt");
        if (!olt) {
            loader.fail(ErrorCode::SchemaError, layer::kOltBoundaries, b.id, "missing required property 'odn.olt'");
            continue;
        }
        b.olt_id = *olt;
        const auto* node = plan.find_node(b.olt_id);
        if (!node || node->kind != NodeKind::CentralOfficeOlt) {
            loader.fail(ErrorCode::DanglingReference, layer::kOltBoundaries, b.id,
                        "boundary references unknown OLT '" + b.olt_id + "'");
            continue;
        }
        b.ring = read_polygon_ring(f);
        plan.olt_boundaries.push_back(std::move(b));
    }

    for (const auto& f : plan.layers[std::string(layer::kServiceAreas)]["features"]) {
        if (!f.is_object()) continue;
        const auto key = feature_key(f);
        const json* odn = odn_props(f);
        if (!odn) {
            loader.fail(ErrorCode::SchemaError, layer::kServiceAreas, key, "feature has no 'odn' property object");
            continue;
        }
        if (geometry_type(f) != "Polygon") {
            loader.fail(ErrorCode::GeometryTypeMismatch, layer::kServiceAreas, key,
                        "service area needs Polygon geometry, got " + geometry_type(f));
            continue;
        }
        try {
            ServiceArea a;
            a.id = opt_string(*odn, "id").value_or(key);
            a.demand_tenants = int_or(*odn, "demand_tenants", 0);
            if (a.demand_tenants < 0) {
                loader.fail(ErrorCode::SchemaError, layer::kServiceAreas, a.id, "demand_tenants must be nonnegative");
                continue;
            }
            a.assigned_fdh = opt_string(*odn, "assigned_fdh");
            if (a.assigned_fdh) {
                const auto* node = plan.find_node(*a.assigned_fdh);
                if (!node || node->kind != NodeKind::Fdh) {
                    loader.fail(ErrorCode::DanglingReference, layer::kServiceAreas, a.id,
                                "service area assigned to unknown FDH '" + *a.assigned_fdh + "'");
                    continue;
                }
            }
            a.ring = read_polygon_ring(f);
            plan.service_areas.push_back(std::move(a));
        } catch (const std::exception& e) {
            loader.fail(ErrorCode::SchemaError, layer::kServiceAreas, key, e.what());
        }
    }

    if (!loader.diagnostics.empty()) throw PlanLoadError(std::move(loader.diagnostics));

    // One tree per PON port.
    std::map<std::string, PonTree> trees;
    for (const auto& seg : plan.segments) {
        for (const auto& port : segment_ports[seg.id]) {
            auto& tree = trees[port];
            tree.root_port = port;
            tree.segments.push_back(seg);
        }
    }
    for (auto& [port, tree] : trees) {
        std::set<std::string_view> members;
        bool feeder_standby = false, distribution_standby = false;
        for (const auto& s : tree.segments) {
            members.insert(s.from_node);
            members.insert(s.to_node);
            if (s.standby) (s.role == CableRole::Feeder ? feeder_standby : distribution_standby) = true;
        }
        for (const auto& n : plan.nodes) {
            if (!members.count(n.id)) continue;
            tree.nodes.push_back(n);
            if (n.kind == NodeKind::CentralOfficeOlt) tree.physical_reach_limit_km = reach_at[n.id];
            if (auto it = splitters_at.find(n.id); it != splitters_at.end()) {
                for (const auto& e : it->second)
                    if (!e.pon_port || *e.pon_port == port) tree.splitters.push_back(e.spec);
            }
        }
        tree.protection = distribution_standby ? ProtectionType::TypeC
                          : feeder_standby     ? ProtectionType::TypeB
                                               : ProtectionType::TypeA;
        plan.trees.push_back(std::move(tree));
    }
    return plan;
}

PlanDocument plan_from_json(const json& bundle, const std::filesystem::path& base_dir) {
    if (!bundle.is_object()) throw Error(ErrorCode::SchemaError, "bundle must be a JSON object");
    std::map<std::string, json> layers;
    if (auto it = bundle.find("layers"); it != bundle.end() && !it->is_null()) {
        if (!it->is_object()) throw Error(ErrorCode::SchemaError, "'layers' must map layer names to collections or paths");
        for (const auto& [name, value] : it->items()) {
            layers[name] = value.is_string() ? read_json_file(base_dir / value.get<std::string>()) : value;
        }
    }
    return assemble_plan(std::move(layers), bundle.value("metadata", json()));
}

PlanDocument load_plan(const std::filesystem::path& path) {
    std::error_code ec;
    auto manifest = std::filesystem::is_directory(path, ec) ? path / "manifest.json" : path;
    return plan_from_json(read_json_file(manifest), manifest.parent_path());
}

PlanDocument load_plan(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("bundle is not valid JSON: ") + e.what());
    }
    return plan_from_json(j);
}

LayerBundle emit_plan(const PlanDocument& plan) {
    LayerBundle out;
    json manifest{{"format", "odn-bundle"}, {"version", 1}, {"metadata", plan.metadata}, {"layers", json::object()}};
    for (const auto& [name, fc] : plan.layers) {
        auto file = layer_file_name(name);
        manifest["layers"][name] = file;
        out.files[file] = dump_stable(fc);
    }
    out.manifest = dump_stable(manifest);
    return out;
}

json emit_plan_inline(const PlanDocument& plan) {
    json layers = json::object();
    for (const auto& [name, fc] : plan.layers) layers[name] = fc;
    return {{"format", "odn-bundle"}, {"version", 1}, {"metadata", plan.metadata}, {"layers", layers}};
}

void write_bundle(const LayerBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write '" + p.string() + "'");
        out << text;
    };
    write(dir / "manifest.json", bundle.manifest);
    for (const auto& [name, text] : bundle.files) write(dir / name, text);
}

std::string dump_stable(const json& j) { return j.dump(2) + "\n"; }

}  // namespace odn::geo
