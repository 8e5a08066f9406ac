#pragma once

#include "odn/coordinate.hpp"
#include "odn/decimal.hpp"
#include "odn/error.hpp"
#include "odn/loss_model.hpp"
#include "odn/model.hpp"
#include "odn/plan.hpp"
#include "odn/power_budget.hpp"
#include "odn/topology.hpp"
#include "odn/violation.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odn::planner {

/// How splitter stages may be stacked on a path.
struct SplitterSetting {
    enum class Kind { Centralized, Dispersed, NLevel };

    Kind kind = Kind::Centralized;
    int levels = 1;  // NLevel only, 1..3

    static SplitterSetting centralized() { return {Kind::Centralized, 1}; }
    static SplitterSetting dispersed() { return {Kind::Dispersed, 2}; }
    /// Throws Error{InvalidArgument} unless 1 <= levels <= 3.
    static SplitterSetting n_level(int levels);

    /// Splitter stages allowed on one path: 1, 2 or `levels`.
    int max_levels() const;

    friend bool operator==(const SplitterSetting&, const SplitterSetting&) = default;
};

/// "centralized", "dispersed" or "n-level:N".
std::optional<SplitterSetting> splitter_setting_from_string(std::string_view text);
std::string to_string(const SplitterSetting& s);

enum class FttxVariant { FTTB, FTTC, FTTH, FTTM };

std::string_view to_string(FttxVariant v);

// ---------------------------------------------------------------------------
// Service-area assignment

struct DemandPoint {
    std::string id;
    Coordinate position;
    int tenants = 0;
};

struct FdhSite {
    std::string id;
    Coordinate position;
    int capacity_tenants = 0;
};

struct Assignment {
    /// demand point id -> FDH id
    std::map<std::string, std::string> fdh_of;
    /// FDH id -> capacity left after assignment
    std::map<std::string, int> remaining_capacity;
};

class InsufficientCapacityError : public Error {
public:
    InsufficientCapacityError(int unassigned_tenants, std::vector<std::string> unassigned_points);

    /// Total demand minus total capacity, or the demand of the points greedy
    /// placement could not fit when the totals alone would allow it.
    int unassigned_tenants() const noexcept { return unassigned_tenants_; }
    const std::vector<std::string>& unassigned_points() const noexcept { return unassigned_points_; }

private:
    int unassigned_tenants_;
    std::vector<std::string> unassigned_points_;
};

/// Greedy nearest-feasible assignment. Points go in decreasing-demand order
/// (ties by id) to the nearest FDH, by haversine distance, that still has room;
/// equal distances go to the smallest FDH id.
/// Throws Error{InvalidArgument} for negative demand or capacity and duplicate
/// ids, InsufficientCapacityError when some point cannot be placed.
Assignment assign_fdh_areas(const std::vector<DemandPoint>& demand_points, const std::vector<FdhSite>& fdh_sites);

// ---------------------------------------------------------------------------
// Placement rules

struct RuleOptions {
    double direct_feed_radius_km = 0.5;
    Decimal drum_length_km = Decimal::from_int(2);
    /// Falls back to plan metadata "splitter_setting"; no level check when neither is set.
    std::optional<SplitterSetting> setting;
};

/// Direct-feed radius, OLT boundary overlap, physical reach, drum length and
/// splitter levels. Sorted by (subject, code, message); never throws for a
/// parsed plan.
std::vector<Violation> check_rules(const geo::PlanDocument& plan, const RuleOptions& options = {});

// ---------------------------------------------------------------------------
// Protection

/// A route given as its segments, in order from the OLT side. Segment
/// endpoints that are not yet in the tree are taken from `nodes`.
struct Route {
    std::vector<OdnNode> nodes;
    std::vector<FiberSegment> segments;
};

struct AlternateRoutes {
    /// FDH (or first-level splitter node) id -> second feeder route from the OLT.
    std::map<std::string, Route> feeder;
    /// Distribution node id -> second route from its upstream splitter node (TypeC).
    std::map<std::string, Route> distribution;
};

/// TypeA returns the tree unchanged. TypeB adds a standby feeder per FDH and
/// gives the first-level splitters two inputs. TypeC also mirrors the
/// distribution routes and upgrades every splitter.
/// Throws Error{MissingAlternateRoute}, Error{RoutesNotDisjoint} or
/// Error{InvalidPlan} when the result does not revalidate.
PonTree apply_protection(const PonTree& tree, ProtectionType type, const AlternateRoutes& routes);

// ---------------------------------------------------------------------------

/// From the ONT's terminal attribute; untagged or unrecognised terminals are FTTH.
/// Throws Error{UnknownOnt}.
FttxVariant classify_fttx(const PonTree& tree, std::string_view ont_id);

// ---------------------------------------------------------------------------
// Scenario templates

enum class ScenarioKind { VillasOutdoorFdh, HighRiseIndoorFdh, SmallBuildingWallFdh, SmallBuildingOutdoorFdh };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view text);

struct ScenarioParams {
    int tenants = 32;
    /// Splitter stages from the OLT side; product must cover `tenants` and stay within 64.
    std::vector<int> split_ratios = {32};
    Decimal feeder_km = Decimal::from_int(3);
    Decimal distribution_km = 0.3_dec;
    Decimal drop_km = 0.1_dec;
    Coordinate origin{55.2708, 25.2048};
    Decimal drum_length_km = Decimal::from_int(2);
    int reach_limit_km = 20;
};

/// Per-kind defaults: villas 32 x 1:32, high-rise 64 x (1:2, 1:32),
/// small buildings 16 x 1:16.
ScenarioParams scenario_defaults(ScenarioKind kind);

/// Builds the OLT -> feeder -> FDH -> distribution -> terminal -> drop skeleton
/// as GeoJSON layers and assembles it. Feeder and distribution runs longer
/// than the drum length are cut into sections at manholes and handholes.
/// Throws Error{InvalidParams}.
geo::PlanDocument scenario_template(ScenarioKind kind, const ScenarioParams& params);

// ---------------------------------------------------------------------------

/// Writes {"total_db", "classification", "attenuator_db", "model"} under a
/// "budget" property of every ONT feature reachable in some tree, using the
/// worst tree when an ONT belongs to several.
void annotate_budget(geo::PlanDocument& plan, const budget::LossModel& model,
                     const budget::BudgetThresholds& thresholds = {});

}  // namespace odn::planner
