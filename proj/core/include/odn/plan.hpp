#pragma once

#include "odn/coordinate.hpp"
#include "odn/error.hpp"
#include "odn/model.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odn::geo {

namespace layer {
inline constexpr std::string_view kParcels = "parcels";
inline constexpr std::string_view kRoads = "roads";
inline constexpr std::string_view kZones = "zones";
inline constexpr std::string_view kWater = "water";
inline constexpr std::string_view kDucts = "ducts";
inline constexpr std::string_view kStructures = "structures";
inline constexpr std::string_view kEquipment = "equipment";
inline constexpr std::string_view kFeederCables = "feeder_cables";
inline constexpr std::string_view kDistributionCables = "distribution_cables";
inline constexpr std::string_view kDropCables = "drop_cables";
inline constexpr std::string_view kOltBoundaries = "olt_boundaries";
inline constexpr std::string_view kServiceAreas = "service_areas";
}  // namespace layer

/// Layers every plan carries (empty when the source omits them).
inline constexpr std::array<std::string_view, 12> kRequiredLayers = {
    layer::kParcels,      layer::kRoads,       layer::kZones,         layer::kWater,
    layer::kDucts,        layer::kStructures,  layer::kEquipment,     layer::kFeederCables,
    layer::kDistributionCables, layer::kDropCables, layer::kOltBoundaries, layer::kServiceAreas};

bool is_required_layer(std::string_view name);

/// Pon port id given to segments that do not name one.
inline constexpr std::string_view kDefaultPonPort = "default";

struct ServiceArea {
    std::string id;
    std::vector<Coordinate> ring;  // closed: first == last
    int demand_tenants = 0;
    std::optional<std::string> assigned_fdh;

    friend bool operator==(const ServiceArea&, const ServiceArea&) = default;
};

struct OltBoundary {
    std::string id;
    std::string olt_id;
    std::vector<Coordinate> ring;

    friend bool operator==(const OltBoundary&, const OltBoundary&) = default;
};

/// A full multi-layer plan: raw GeoJSON layers plus the ODN entities and PON
/// trees assembled from them. Layers are the source of truth; everything else
/// is derived on load and rebuilt identically on reload.
struct PlanDocument {
    /// layer name -> FeatureCollection
    std::map<std::string, nlohmann::json> layers;
    /// {"projection", "version", "author", ...}; unknown keys are kept.
    nlohmann::json metadata = nlohmann::json::object();

    std::vector<OdnNode> nodes;
    std::vector<FiberSegment> segments;
    std::vector<PonTree> trees;
    std::vector<ServiceArea> service_areas;
    std::vector<OltBoundary> olt_boundaries;

    const OdnNode* find_node(std::string_view id) const;

    friend bool operator==(const PlanDocument&, const PlanDocument&) = default;
};

struct Diagnostic {
    ErrorCode code;
    std::string layer;
    std::string feature_id;
    std::string message;
};

/// Raised by the loaders; carries every problem found, not just the first.
class PlanLoadError : public Error {
public:
    explicit PlanLoadError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Normalises the layers (features sorted by id, coordinates at 7 decimals in
/// the known layers; unknown layers kept verbatim), parses the "odn" feature
/// properties and assembles one PonTree per PON port.
PlanDocument assemble_plan(std::map<std::string, nlohmann::json> layers, nlohmann::json metadata = nullptr);

/// Bundle object: {"metadata": {...}, "layers": {name: FeatureCollection | "relative/path.geojson"}}.
/// String entries are resolved against `base_dir`.
PlanDocument plan_from_json(const nlohmann::json& bundle, const std::filesystem::path& base_dir = {});

/// A manifest file, or a directory holding manifest.json.
PlanDocument load_plan(const std::filesystem::path& path);
/// An inline bundle read from a stream.
PlanDocument load_plan(std::istream& in);

/// Manifest plus one GeoJSON text per layer, keyed by relative file name.
struct LayerBundle {
    std::string manifest;
    std::map<std::string, std::string> files;
};

LayerBundle emit_plan(const PlanDocument& plan);
/// Single-document form of the same bundle.
nlohmann::json emit_plan_inline(const PlanDocument& plan);
/// Writes manifest.json and the layer files into `dir` (created if needed).
void write_bundle(const LayerBundle& bundle, const std::filesystem::path& dir);

/// Deterministic text form used for every emitted document.
std::string dump_stable(const nlohmann::json& j);

}  // namespace odn::geo
