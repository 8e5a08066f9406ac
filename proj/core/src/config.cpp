#include "odn/config.hpp"

#include "odn/error.hpp"

#include <cstdlib>
#include <fstream>

namespace odn {

namespace {

Decimal decimal_of(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return Decimal::parse(v.get<std::string>());
    if (v.is_number()) return Decimal::from_double(v.get<double>());
    throw Error(ErrorCode::SchemaError, "config key '" + key + "' must be a number");
}

}  // namespace

PlannerConfig config_from_json(const nlohmann::json& j, PlannerConfig c) {
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "thresholds") {
                if (!v.is_object()) throw Error(ErrorCode::SchemaError, "'thresholds' must be an object");
                for (const auto& [tk, tv] : v.items()) {
                    if (tk == "min_db")
                        c.thresholds.min_db = decimal_of(tv, tk);
                    else if (tk == "max_db")
                        c.thresholds.max_db = decimal_of(tv, tk);
                    else
                        throw Error(ErrorCode::SchemaError, "unknown thresholds key '" + tk + "'");
                }
                c.thresholds.validate();
            } else if (key == "cable_ladder") {
                c.ladder = CableLadder(v.get<std::vector<int>>());
            } else if (key == "drum_length_km") {
                c.drum_length_km = decimal_of(v, key);
                if (c.drum_length_km <= Decimal{}) throw Error(ErrorCode::SchemaError, "drum length must be positive");
            } else if (key == "downstream_mbps") {
                c.downstream_mbps = v.get<double>();
                if (!(c.downstream_mbps > 0)) throw Error(ErrorCode::SchemaError, "downstream rate must be positive");
            } else if (key == "split_cap") {
                c.split_cap = v.get<int>();
                if (c.split_cap != 64 && c.split_cap != 128)
                    throw Error(ErrorCode::SchemaError, "split cap must be 64 or 128");
            } else if (key == "direct_feed_radius_km") {
                c.direct_feed_radius_km = v.get<double>();
                if (!(c.direct_feed_radius_km >= 0))
                    throw Error(ErrorCode::SchemaError, "direct-feed radius must be nonnegative");
            } else if (key == "model") {
                c.model = v.get<std::string>();
            } else {
                throw Error(ErrorCode::SchemaError, "unknown config key '" + key + "'");
            }
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) throw;
        throw Error(ErrorCode::SchemaError, e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("bad config value: ") + e.what());
    }
    return c;
}

PlannerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, "config '" + path.string() + "' is not JSON: " + e.what());
    }
    return config_from_json(j);
}

PlannerConfig config_from_env() {
    const char* path = std::getenv(kConfigEnvVar);
    if (!path || !*path) return {};
    return load_config(path);
}

nlohmann::json to_json(const PlannerConfig& c) {
    return {{"thresholds", {{"min_db", c.thresholds.min_db.to_double()}, {"max_db", c.thresholds.max_db.to_double()}}},
            {"cable_ladder", c.ladder.sizes()},
            {"drum_length_km", c.drum_length_km.to_double()},
            {"downstream_mbps", c.downstream_mbps},
            {"split_cap", c.split_cap},
            {"direct_feed_radius_km", c.direct_feed_radius_km},
            {"model", c.model}};
}

}  // namespace odn
