#pragma once

#include "odn/decimal.hpp"
#include "odn/model.hpp"
#include "odn/power_budget.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace odn {

/// Planner-wide defaults; every field may be overridden from a JSON file.
struct PlannerConfig {
    budget::BudgetThresholds thresholds;
    CableLadder ladder;
    Decimal drum_length_km = Decimal::from_int(2);
    double downstream_mbps = 2400.0;
    int split_cap = 64;
    double direct_feed_radius_km = 0.5;
    /// Preset name or path of a loss-model file.
    std::string model = "theoretical";
};

/// Keys: "thresholds" {"min_db", "max_db"}, "cable_ladder", "drum_length_km",
/// "downstream_mbps", "split_cap", "direct_feed_radius_km", "model".
/// Throws Error{SchemaError} for unknown keys or bad values.
PlannerConfig config_from_json(const nlohmann::json& j, PlannerConfig base = {});

/// Throws Error{IoError} when the file cannot be read.
PlannerConfig load_config(const std::filesystem::path& path);

/// Name of the environment variable naming a defaults file.
inline constexpr const char* kConfigEnvVar = "ODN_PLANNER_CONFIG";

/// Defaults, overlaid with the file named by ODN_PLANNER_CONFIG when it is set.
PlannerConfig config_from_env();

nlohmann::json to_json(const PlannerConfig& c);

}  // namespace odn
