#pragma once

#include "odn/decimal.hpp"
#include "odn/error.hpp"
#include "odn/loss_model.hpp"
#include "odn/model.hpp"
#include "odn/power_budget.hpp"
#include "odn/topology.hpp"
#include "odn/violation.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace odn::geo {
struct PlanDocument;
}

namespace odn::dimensioning {

/// Usable GPON downstream rate; 37.5 Mb/s x 64 and 75 Mb/s x 32 both give 2400.
inline constexpr double kDefaultDownstreamMbps = 2400.0;
/// Nominal upstream rate, reported as metadata only.
inline constexpr double kNominalUpstreamMbps = 1250.0;
/// Spare fibre planned on top of demand.
inline constexpr double kFiberMargin = 1.25;

/// ceil(tenants / ratio). Throws Error{InvalidArgument} for tenants < 1.
int splitter_count(int tenants, SplitRatio ratio);

/// One or more ladder cables, largest first.
struct CableSelection {
    std::vector<int> cables;

    int total_fibers() const;
    bool single() const { return cables.size() == 1; }

    friend bool operator==(const CableSelection&, const CableSelection&) = default;
};

/// Ladder size nearest to demand x 1.25 (ties go up), never below demand.
/// A demand no single cable can carry is covered by full cables of the
/// largest size plus one cable sized the same way for the remainder.
CableSelection cable_size(int demand_fibers, const CableLadder& ladder = {});

double bandwidth_per_tenant(double downstream_rate_mbps, int total_split);

/// One first-level splitter per PON port.
int pon_ports_required(int tenants, int split_ratio);

struct OltCapacity {
    int sub_racks = 2;
    int cards_per_sub_rack = 16;
    int ports_per_card = 8;

    /// Throws Error{InvalidArgument}: 2-3 sub racks, positive cards, 4 or 8 ports per card.
    void validate() const;
};

int olt_total_ports(const OltCapacity& cap);

struct BomItem {
    std::string item;
    std::string unit;  // "pcs" or "km"
    Decimal quantity;

    friend bool operator==(const BomItem&, const BomItem&) = default;
};

/// Itemised quantities in a fixed order: splitters by ratio, cabinets,
/// structures, terminals, connectors, splices, attenuators, PON ports, then
/// cable kilometres by role and size (kilometres kept at metre resolution).
struct Bom {
    std::vector<BomItem> items;

    /// Zero for an absent item.
    Decimal quantity(std::string_view item) const;

    nlohmann::json to_json() const;
    /// "item,unit,quantity" header, one row per item.
    std::string to_csv() const;

    friend bool operator==(const Bom&, const Bom&) = default;
};

struct BomOptions {
    TopologyOptions topology;
    budget::LossModel model = budget::theoretical_model();
    budget::BudgetThresholds thresholds;
};

/// Raised by bom() for plans whose trees fail validate_topology.
class InvalidPlanError : public Error {
public:
    explicit InvalidPlanError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Cables include standby routes; a protected tree consumes two PON ports.
/// Attenuators are counted per ONT whose loss under `options.model` falls
/// below the lower threshold.
Bom bom(const geo::PlanDocument& plan, const BomOptions& options = {});

}  // namespace odn::dimensioning
