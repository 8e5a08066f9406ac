#pragma once

#include "odn/decimal.hpp"
#include "odn/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odn::budget {

/// Per-component insertion losses used by the additive budget.
struct LossModel {
    std::string name;
    Decimal transmission_loss_db_per_km;
    Decimal connector_loss_db;
    Decimal splice_loss_db;
    std::map<SplitRatio, Decimal> splitter_loss_db;
    Decimal engineering_margin_db;

    std::optional<Decimal> splitter_loss(SplitRatio ratio) const;

    friend bool operator==(const LossModel&, const LossModel&) = default;
};

/// Catalogue values: TL 0.35 dB/km, splice 0.1, connector 0.2, EM 3,
/// 1:2..1:64 = 3.5, 7.2, 10.5, 13.5, 17, 19.7 dB.
LossModel theoretical_model();

/// Field-measured values: TL 0.36 dB/km, splice 0.05, connector 0.21, EM 3,
/// 1:2..1:64 = 3.48, 7.15, 10.69, 13.72, 17.13, 19.8 dB.
LossModel practical_model();

/// "theoretical" or "practical"; throws Error{InvalidArgument} otherwise.
LossModel preset_model(std::string_view name);

/// Problems with a model: negative coefficients, splitter losses that do not
/// grow with the split ratio. Empty when the model is usable.
std::vector<std::string> check_model(const LossModel& model);

/// {"name", "transmission_loss_db_per_km", "connector_loss_db", "splice_loss_db",
///  "engineering_margin_db", "splitter_loss_db": {"1:2": 3.5, ...}}
/// Numbers may be given as JSON numbers or decimal strings. Keys absent from
/// the object fall back to `base` when one is supplied.
LossModel loss_model_from_json(const nlohmann::json& j, const LossModel* base = nullptr);
nlohmann::json to_json(const LossModel& model);

/// A preset name, or a path to a JSON model file.
LossModel resolve_model(const std::string& name_or_path);

}  // namespace odn::budget
