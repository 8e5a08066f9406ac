#pragma once

#include "odn/decimal.hpp"
#include "odn/loss_model.hpp"
#include "odn/model.hpp"
#include "odn/topology.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <string_view>

namespace odn::budget {

/// Class B+ end-to-end loss window. Both bounds are inclusive.
struct BudgetThresholds {
    Decimal min_db = Decimal::from_int(13);
    Decimal max_db = Decimal::from_int(28);

    /// Throws Error{InvalidArgument} unless 0 < min_db < max_db.
    void validate() const;
};

/// The five addends of the end-to-end loss and their sum.
struct PathLossBreakdown {
    Decimal transmission_db;
    Decimal connector_db;
    Decimal splitter_db;
    Decimal splice_db;
    Decimal engineering_margin_db;
    Decimal total_db;

    friend bool operator==(const PathLossBreakdown&, const PathLossBreakdown&) = default;
};

enum class BudgetClass { InService, NeedsAttenuator, OutOfBudget };

std::string_view to_string(BudgetClass c);

/// Total loss = fiber + connectors + splitters + splices + engineering margin.
/// The margin is applied once per path. A 2:N splitter is charged at its 1:N
/// coefficient. Throws Error{UnknownSplitterRatio} when the model lacks a ratio.
PathLossBreakdown path_loss(const PathDescriptor& path, const LossModel& model);

BudgetClass classify_budget(Decimal total_db, const BudgetThresholds& thresholds = {});

/// min_db - total_db. Throws Error{NotApplicable} unless the link needs an attenuator.
Decimal attenuator_value(Decimal total_db, const BudgetThresholds& thresholds = {});

struct OntBudget {
    std::string ont_id;
    PathLossBreakdown loss;
};

/// The ONT with the highest total loss; ties go to the smallest id.
/// Throws Error{EmptyTree} when no ONT is reachable.
OntBudget worst_case_ont(const PonTree& tree, const LossModel& model);

/// Longest fiber run that keeps the total at max_db:
///   (max_db - EM - splitters - connectors - splices) / dB-per-km.
/// Throws Error{NoFeasibleReach} when the fixed losses alone reach max_db.
/// Returns +infinity for a lossless fiber coefficient.
double max_reach_km(std::span<const SplitRatio> splitters, int connector_count, int splice_count,
                    const LossModel& model, const BudgetThresholds& thresholds = {});

/// Same inversion with connector and splice losses given as one measured
/// figure in dB (as-built records report this total rather than counts).
double max_reach_km(std::span<const SplitRatio> splitters, Decimal passive_loss_db, const LossModel& model,
                    const BudgetThresholds& thresholds = {});

struct ModelComparison {
    Decimal total_a_db;
    Decimal total_b_db;
    /// (total_a - total_b) / total_a
    double relative_difference = 0.0;
};

ModelComparison compare_models(const PathDescriptor& path, const LossModel& a, const LossModel& b);

nlohmann::json to_json(const PathLossBreakdown& loss);

}  // namespace odn::budget
