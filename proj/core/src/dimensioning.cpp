#include "odn/dimensioning.hpp"

#include "odn/error.hpp"
#include "odn/plan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace odn::dimensioning {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

int single_cable(int demand, const CableLadder& ladder) {
    const double target = demand * kFiberMargin;
    const auto& sizes = ladder.sizes();
    std::size_t best = 0;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        // <= so an exact tie resolves to the larger size
        if (std::fabs(sizes[i] - target) <= std::fabs(sizes[best] - target)) best = i;
    }
    while (best < sizes.size() && sizes[best] < demand) ++best;
    return best < sizes.size() ? sizes[best] : -1;
}

std::string_view role_order_name(CableRole r) { return to_string(r); }

}  // namespace

int splitter_count(int tenants, SplitRatio ratio) {
    if (tenants < 1) throw Error(ErrorCode::InvalidArgument, "tenant count must be at least 1");
    return ceil_div(tenants, ports(ratio));
}

int CableSelection::total_fibers() const {
    int total = 0;
    for (int c : cables) total += c;
    return total;
}

CableSelection cable_size(int demand_fibers, const CableLadder& ladder) {
    if (demand_fibers < 1) throw Error(ErrorCode::InvalidArgument, "fiber demand must be at least 1");
    CableSelection sel;
    int remaining = demand_fibers;
    while (remaining > ladder.largest()) {
        sel.cables.push_back(ladder.largest());
        remaining -= ladder.largest();
    }
    if (remaining > 0) sel.cables.push_back(single_cable(remaining, ladder));
    return sel;
}

double bandwidth_per_tenant(double downstream_rate_mbps, int total_split) {
    if (total_split < 1) throw Error(ErrorCode::InvalidArgument, "total split must be at least 1");
    if (!(downstream_rate_mbps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "downstream rate must be nonnegative");
    return downstream_rate_mbps / total_split;
}

int pon_ports_required(int tenants, int split_ratio) {
    if (tenants < 1) throw Error(ErrorCode::InvalidArgument, "tenant count must be at least 1");
    if (split_ratio < 1) throw Error(ErrorCode::InvalidArgument, "split ratio must be at least 1");
    return ceil_div(tenants, split_ratio);
}

void OltCapacity::validate() const {
    if (sub_racks < 2 || sub_racks > 3) throw Error(ErrorCode::InvalidArgument, "an OLT rack holds 2 or 3 sub racks");
    if (cards_per_sub_rack < 1) throw Error(ErrorCode::InvalidArgument, "cards per sub rack must be positive");
    if (ports_per_card != 4 && ports_per_card != 8)
        throw Error(ErrorCode::InvalidArgument, "GPON cards carry 4 or 8 PON ports");
}

int olt_total_ports(const OltCapacity& cap) {
    cap.validate();
    return cap.sub_racks * cap.cards_per_sub_rack * cap.ports_per_card;
}

Decimal Bom::quantity(std::string_view item) const {
    for (const auto& i : items)
        if (i.item == item) return i.quantity;
    return {};
}

nlohmann::json Bom::to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& i : items) {
        const auto text = i.unit == "km" ? i.quantity.to_fixed(3) : i.quantity.to_string();
        arr.push_back({{"item", i.item}, {"unit", i.unit}, {"quantity", std::stod(text)}});
    }
    return {{"items", arr}};
}

std::string Bom::to_csv() const {
    std::ostringstream os;
    os << "item,unit,quantity\n";
    for (const auto& i : items) {
        os << i.item << ',' << i.unit << ',' << (i.unit == "km" ? i.quantity.to_fixed(3) : i.quantity.to_string())
           << '\n';
    }
    return os.str();
}

InvalidPlanError::InvalidPlanError(std::vector<Violation> violations)
    : Error(ErrorCode::InvalidPlan, std::to_string(violations.size()) + " topology violation(s)" +
                                        (violations.empty() ? std::string()
                                                            : "; first: " + std::string(odn::to_string(
                                                                                violations.front().code)) +
                                                                  " at '" + violations.front().subject_id + "'")),
      violations_(std::move(violations)) {}

Bom bom(const geo::PlanDocument& plan, const BomOptions& options) {
    std::vector<Violation> errors;
    for (const auto& tree : plan.trees) {
        for (auto& v : validate_topology(tree, options.topology))
            if (v.severity == Severity::Error) errors.push_back(std::move(v));
    }
    if (!errors.empty()) throw InvalidPlanError(std::move(errors));

    std::map<std::pair<int, SplitRatio>, long long> splitters;  // (inputs, ratio)
    long long pon_ports = 0, attenuators = 0;
    for (const auto& tree : plan.trees) {
        for (const auto& s : tree.splitters) ++splitters[{s.input_ports, s.output}];
        pon_ports += tree.protection == ProtectionType::TypeA ? 1 : 2;
        for (const auto& path : ont_paths(tree)) {
            const auto loss = budget::path_loss(path, options.model);
            if (budget::classify_budget(loss.total_db, options.thresholds) == budget::BudgetClass::NeedsAttenuator)
                ++attenuators;
        }
    }

    std::map<NodeKind, long long> nodes;
    for (const auto& n : plan.nodes) ++nodes[n.kind];

    long long connectors = 0, splices = 0;
    std::map<std::pair<CableRole, int>, Decimal> cable_km;
    for (const auto& s : plan.segments) {
        connectors += s.connector_count;
        splices += s.splice_count;
        cable_km[{s.role, s.fiber_count}] += s.effective_length_km();
    }

    Bom out;
    auto pcs = [&](std::string item, long long n) { out.items.push_back({std::move(item), "pcs", Decimal::from_int(n)}); };
    for (int inputs : {1, 2}) {
        for (auto r : kAllSplitRatios) {
            auto it = splitters.find({inputs, r});
            const long long n = it == splitters.end() ? 0 : it->second;
            if (inputs == 2 && n == 0) continue;
            pcs("splitter " + std::to_string(inputs) + ":" + std::to_string(ports(r)), n);
        }
    }
    for (auto kind : {NodeKind::CentralOfficeOlt, NodeKind::Fdh, NodeKind::Fat, NodeKind::MicroOdf, NodeKind::JointBox,
                      NodeKind::Manhole, NodeKind::Handhole, NodeKind::Ont}) {
        pcs(std::string(is_equipment(kind) ? "equipment " : "structure ") + std::string(odn::to_string(kind)),
            nodes[kind]);
    }
    pcs("connectors", connectors);
    pcs("splices", splices);
    pcs("attenuators", attenuators);
    pcs("pon_ports", pon_ports);
    for (const auto& [key, km] : cable_km) {
        out.items.push_back({"cable " + std::string(role_order_name(key.first)) + " " + std::to_string(key.second) + "F",
                             "km", km.rounded(3)});
    }
    return out;
}

}  // namespace odn::dimensioning
