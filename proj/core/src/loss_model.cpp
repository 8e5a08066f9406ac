#include "odn/loss_model.hpp"

#include "odn/error.hpp"

#include <fstream>

namespace odn::budget {

namespace {

LossModel make_model(std::string name, const char* tl, const char* splice, const char* connector,
                     std::initializer_list<std::pair<SplitRatio, const char*>> splitters, const char* em) {
    LossModel m;
    m.name = std::move(name);
    m.transmission_loss_db_per_km = Decimal::parse(tl);
    m.splice_loss_db = Decimal::parse(splice);
    m.connector_loss_db = Decimal::parse(connector);
    for (const auto& [ratio, loss] : splitters) m.splitter_loss_db[ratio] = Decimal::parse(loss);
    m.engineering_margin_db = Decimal::parse(em);
    return m;
}

Decimal decimal_from_json(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return Decimal::parse(v.get<std::string>());
    if (v.is_number()) return Decimal::from_double(v.get<double>());
    throw Error(ErrorCode::SchemaError, "'" + key + "' must be a number or decimal string");
}

SplitRatio ratio_from_key(const std::string& key) {
    std::string_view k = key;
    if (k.starts_with("1:")) k.remove_prefix(2);
    int value = 0;
    for (char c : k) {
        if (c < '0' || c > '9') throw Error(ErrorCode::SchemaError, "bad splitter ratio key '" + key + "'");
        value = value * 10 + (c - '0');
        if (value > 1024) break;
    }
    auto r = split_ratio_from_int(value);
    if (!r) throw Error(ErrorCode::SchemaError, "unsupported splitter ratio '" + key + "'");
    return *r;
}

}  // namespace

std::optional<Decimal> LossModel::splitter_loss(SplitRatio ratio) const {
    auto it = splitter_loss_db.find(ratio);
    if (it == splitter_loss_db.end()) return std::nullopt;
    return it->second;
}

LossModel theoretical_model() {
    return make_model("theoretical", "0.35", "0.1", "0.2",
                      {{SplitRatio::R64, "19.7"},
                       {SplitRatio::R32, "17"},
                       {SplitRatio::R16, "13.5"},
                       {SplitRatio::R8, "10.5"},
                       {SplitRatio::R4, "7.2"},
                       {SplitRatio::R2, "3.5"}},
                      "3");
}

LossModel practical_model() {
    return make_model("practical", "0.36", "0.05", "0.21",
                      {{SplitRatio::R64, "19.8"},
                       {SplitRatio::R32, "17.13"},
                       {SplitRatio::R16, "13.72"},
                       {SplitRatio::R8, "10.69"},
                       {SplitRatio::R4, "7.15"},
                       {SplitRatio::R2, "3.48"}},
                      "3");
}

LossModel preset_model(std::string_view name) {
    if (name == "theoretical") return theoretical_model();
    if (name == "practical") return practical_model();
    throw Error(ErrorCode::InvalidArgument, "unknown loss model preset '" + std::string(name) + "'");
}

std::vector<std::string> check_model(const LossModel& m) {
    std::vector<std::string> problems;
    const Decimal zero;
    if (m.transmission_loss_db_per_km < zero) problems.push_back("transmission loss is negative");
    if (m.connector_loss_db < zero) problems.push_back("connector loss is negative");
    if (m.splice_loss_db < zero) problems.push_back("splice loss is negative");
    if (m.engineering_margin_db < zero) problems.push_back("engineering margin is negative");
    std::optional<std::pair<SplitRatio, Decimal>> prev;
    for (const auto& [ratio, loss] : m.splitter_loss_db) {
        if (loss < zero) problems.push_back(to_string(ratio) + " splitter loss is negative");
        if (prev && loss <= prev->second)
            problems.push_back(to_string(ratio) + " splitter loss does not exceed " + to_string(prev->first));
        prev = std::make_pair(ratio, loss);
    }
    return problems;
}

LossModel loss_model_from_json(const nlohmann::json& j, const LossModel* base) {
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "loss model must be a JSON object");
    LossModel m = base ? *base : LossModel{};
    auto field = [&](const char* key, Decimal& target) {
        if (j.contains(key)) {
            target = decimal_from_json(j.at(key), key);
        } else if (!base) {
            throw Error(ErrorCode::SchemaError, std::string("loss model is missing '") + key + "'");
        }
    };
    m.name = j.value("name", base ? base->name : std::string("custom"));
    field("transmission_loss_db_per_km", m.transmission_loss_db_per_km);
    field("connector_loss_db", m.connector_loss_db);
    field("splice_loss_db", m.splice_loss_db);
    field("engineering_margin_db", m.engineering_margin_db);
    if (j.contains("splitter_loss_db")) {
        const auto& table = j.at("splitter_loss_db");
        if (!table.is_object()) throw Error(ErrorCode::SchemaError, "'splitter_loss_db' must be an object");
        if (!base) m.splitter_loss_db.clear();
        for (const auto& [key, value] : table.items()) m.splitter_loss_db[ratio_from_key(key)] = decimal_from_json(value, key);
    } else if (!base) {
        throw Error(ErrorCode::SchemaError, "loss model is missing 'splitter_loss_db'");
    }
    if (auto problems = check_model(m); !problems.empty()) {
        throw Error(ErrorCode::InvalidArgument, "loss model '" + m.name + "': " + problems.front());
    }
    return m;
}

nlohmann::json to_json(const LossModel& m) {
    nlohmann::json split = nlohmann::json::object();
    for (const auto& [ratio, loss] : m.splitter_loss_db) split[to_string(ratio)] = loss.to_double();
    return {{"name", m.name},
            {"transmission_loss_db_per_km", m.transmission_loss_db_per_km.to_double()},
            {"connector_loss_db", m.connector_loss_db.to_double()},
            {"splice_loss_db", m.splice_loss_db.to_double()},
            {"engineering_margin_db", m.engineering_margin_db.to_double()},
            {"splitter_loss_db", split}};
}

LossModel resolve_model(const std::string& name_or_path) {
    if (name_or_path == "theoretical" || name_or_path == "practical") return preset_model(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open loss model file '" + name_or_path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, "loss model file '" + name_or_path + "': " + e.what());
    }
    return loss_model_from_json(j);
}

}  // namespace odn::budget
