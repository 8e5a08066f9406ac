#include "odn/power_budget.hpp"

#include "odn/error.hpp"

#include <limits>

namespace odn::budget {

namespace {

Decimal splitter_sum(std::span<const SplitRatio> ratios, const LossModel& model) {
    Decimal sum;
    for (auto r : ratios) {
        auto loss = model.splitter_loss(r);
        if (!loss) throw Error(ErrorCode::UnknownSplitterRatio, "model '" + model.name + "' has no " + to_string(r));
        sum += *loss;
    }
    return sum;
}

double solve_reach(Decimal headroom, const LossModel& model) {
    if (headroom <= Decimal{}) {
        throw Error(ErrorCode::NoFeasibleReach,
                    "fixed losses leave " + headroom.to_string() + " dB of headroom; no fiber length fits");
    }
    if (model.transmission_loss_db_per_km == Decimal{}) return std::numeric_limits<double>::infinity();
    return headroom.to_double() / model.transmission_loss_db_per_km.to_double();
}

}  // namespace

void BudgetThresholds::validate() const {
    if (!(Decimal{} < min_db && min_db < max_db)) {
        throw Error(ErrorCode::InvalidArgument, "thresholds must satisfy 0 < min_db < max_db");
    }
}

std::string_view to_string(BudgetClass c) {
    switch (c) {
        case BudgetClass::InService: return "InService";
        case BudgetClass::NeedsAttenuator: return "NeedsAttenuator";
        case BudgetClass::OutOfBudget: return "OutOfBudget";
    }
    return "Unknown";
}

PathLossBreakdown path_loss(const PathDescriptor& path, const LossModel& model) {
    PathLossBreakdown b;
    b.transmission_db = path.length_km * model.transmission_loss_db_per_km;
    b.connector_db = model.connector_loss_db * path.connector_count;
    b.splice_db = model.splice_loss_db * path.splice_count;
    const auto ratios = path.ratios();
    b.splitter_db = splitter_sum(ratios, model);
    b.engineering_margin_db = model.engineering_margin_db;
    b.total_db = b.transmission_db + b.connector_db + b.splitter_db + b.splice_db + b.engineering_margin_db;
    return b;
}

BudgetClass classify_budget(Decimal total_db, const BudgetThresholds& t) {
    if (total_db < t.min_db) return BudgetClass::NeedsAttenuator;
    if (total_db > t.max_db) return BudgetClass::OutOfBudget;
    return BudgetClass::InService;
}

Decimal attenuator_value(Decimal total_db, const BudgetThresholds& t) {
    if (classify_budget(total_db, t) != BudgetClass::NeedsAttenuator) {
        throw Error(ErrorCode::NotApplicable, "loss of " + total_db.to_string() + " dB needs no attenuator");
    }
    return t.min_db - total_db;
}

OntBudget worst_case_ont(const PonTree& tree, const LossModel& model) {
    const auto paths = ont_paths(tree);
    if (paths.empty()) throw Error(ErrorCode::EmptyTree, "tree '" + tree.root_port + "' has no reachable ONT");
    std::optional<OntBudget> worst;
    for (const auto& p : paths) {  // ordered by id, so strict > keeps the smallest id on ties
        auto loss = path_loss(p, model);
        if (!worst || loss.total_db > worst->loss.total_db) worst = OntBudget{p.ont_id, loss};
    }
    return *worst;
}

double max_reach_km(std::span<const SplitRatio> splitters, int connector_count, int splice_count,
                    const LossModel& model, const BudgetThresholds& thresholds) {
    if (connector_count < 0 || splice_count < 0)
        throw Error(ErrorCode::InvalidArgument, "connector and splice counts must be nonnegative");
    const Decimal passive = model.connector_loss_db * connector_count + model.splice_loss_db * splice_count;
    return max_reach_km(splitters, passive, model, thresholds);
}

double max_reach_km(std::span<const SplitRatio> splitters, Decimal passive_loss_db, const LossModel& model,
                    const BudgetThresholds& thresholds) {
    if (passive_loss_db < Decimal{}) throw Error(ErrorCode::InvalidArgument, "passive loss must be nonnegative");
    const Decimal fixed = model.engineering_margin_db + splitter_sum(splitters, model) + passive_loss_db;
    return solve_reach(thresholds.max_db - fixed, model);
}

ModelComparison compare_models(const PathDescriptor& path, const LossModel& a, const LossModel& b) {
    ModelComparison c;
    c.total_a_db = path_loss(path, a).total_db;
    c.total_b_db = path_loss(path, b).total_db;
    const Decimal diff = c.total_a_db - c.total_b_db;
    if (diff == Decimal{}) {
        c.relative_difference = 0.0;
    } else if (c.total_a_db == Decimal{}) {
        throw Error(ErrorCode::InvalidArgument, "relative difference undefined for a zero reference total");
    } else {
        c.relative_difference = diff.to_double() / c.total_a_db.to_double();
    }
    return c;
}

nlohmann::json to_json(const PathLossBreakdown& loss) {
    return {{"transmission_db", loss.transmission_db.to_double()},
            {"connector_db", loss.connector_db.to_double()},
            {"splitter_db", loss.splitter_db.to_double()},
            {"splice_db", loss.splice_db.to_double()},
            {"engineering_margin_db", loss.engineering_margin_db.to_double()},
            {"total_db", loss.total_db.to_double()}};
}

}  // namespace odn::budget
