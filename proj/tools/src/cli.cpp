#include "odn/cli.hpp"

#include "odn/config.hpp"
#include "odn/dimensioning.hpp"
#include "odn/error.hpp"
#include "odn/georef.hpp"
#include "odn/loss_model.hpp"
#include "odn/plan.hpp"
#include "odn/planner.hpp"
#include "odn/power_budget.hpp"
#include "odn/topology.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#ifndef ODN_PLANNER_VERSION
#define ODN_PLANNER_VERSION "0.0.0"
#endif

namespace odn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
    return os.str();
}

namespace {

int exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NoFeasibleReach:
        case ErrorCode::InvalidPlan:
        case ErrorCode::EmptyTree:
        case ErrorCode::InsufficientCapacity: return kDomainError;
        default: return kInputError;
    }
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + p.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// path -> sha256 for a file, or for every regular file directly inside a directory.
json digest_inputs(const std::vector<std::string>& paths) {
    json out = json::object();
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file()) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) out[(fs::path(p) / f.filename()).generic_string()] = sha256_hex(read_bytes(f));
        } else if (fs::exists(p, ec)) {
            out[p] = sha256_hex(read_bytes(p));
        }
    }
    return out;
}

/// Sorted by (subject, code) with repeats of the same pair dropped.
json violations_json(std::vector<Violation> vs) {
    std::stable_sort(vs.begin(), vs.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.subject_id, a.code) < std::tie(b.subject_id, b.code);
    });
    vs.erase(std::unique(vs.begin(), vs.end(),
                         [](const Violation& a, const Violation& b) {
                             return a.subject_id == b.subject_id && a.code == b.code;
                         }),
             vs.end());
    return to_json(vs);
}

json report(std::string_view command, json inputs, json results, json violations = json::array()) {
    return {{"command", command},
            {"inputs", std::move(inputs)},
            {"results", std::move(results)},
            {"violations", std::move(violations)},
            {"version", ODN_PLANNER_VERSION}};
}

void print(std::ostream& out, const json& j) { out << geo::dump_stable(j); }

std::vector<SplitRatio> parse_ratios(const std::string& text) {
    std::vector<SplitRatio> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon != std::string::npos) item = item.substr(colon + 1);
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw Error(ErrorCode::InvalidArgument, "'" + text + "' is not a list of split ratios");
        auto r = split_ratio_from_int(n);
        if (!r) throw Error(ErrorCode::UnknownSplitterRatio, "1:" + std::to_string(n) + " is not a supported ratio");
        out.push_back(*r);
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no split ratios given");
    return out;
}

Decimal parse_decimal(const std::string& text, std::string_view what) {
    try {
        return Decimal::parse(text);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " '" + text + "' is not a decimal number");
    }
}

/// Error-severity topology findings across all trees.
std::vector<Violation> topology_errors(const geo::PlanDocument& plan, const PlannerConfig& cfg) {
    std::vector<Violation> out;
    for (const auto& tree : plan.trees)
        for (auto& v : validate_topology(tree, {cfg.split_cap, cfg.ladder}))
            if (v.severity == Severity::Error) out.push_back(std::move(v));
    return out;
}

json ont_budget_json(const PathDescriptor& path, const std::string& tree, const budget::LossModel& model,
                     const budget::BudgetThresholds& th) {
    const auto loss = budget::path_loss(path, model);
    const auto cls = budget::classify_budget(loss.total_db, th);
    json j = {{"ont", path.ont_id},
              {"pon_port", tree},
              {"length_km", path.length_km.to_double()},
              {"connectors", path.connector_count},
              {"splices", path.splice_count},
              {"total_split", total_split(path)},
              {"loss", budget::to_json(loss)},
              {"classification", budget::to_string(cls)},
              {"attenuator_db", nullptr}};
    if (cls == budget::BudgetClass::NeedsAttenuator)
        j["attenuator_db"] = budget::attenuator_value(loss.total_db, th).to_double();
    return j;
}

struct Shared {
    std::string config_path;
    PlannerConfig config;
};

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string bundle;
    std::optional<std::string> setting;
};

int cmd_validate(const ValidateArgs& a, const Shared& s, std::ostream& out) {
    const auto plan = geo::load_plan(fs::path(a.bundle));
    std::vector<Violation> all;
    for (const auto& tree : plan.trees)
        for (auto& v : validate_topology(tree, {s.config.split_cap, s.config.ladder})) all.push_back(std::move(v));
    planner::RuleOptions rules{s.config.direct_feed_radius_km, s.config.drum_length_km, std::nullopt};
    if (a.setting) {
        rules.setting = planner::splitter_setting_from_string(*a.setting);
        if (!rules.setting) throw Error(ErrorCode::InvalidArgument, "unknown splitter setting '" + *a.setting + "'");
    }
    for (auto& v : planner::check_rules(plan, rules)) all.push_back(std::move(v));

    std::size_t onts = 0;
    for (const auto& n : plan.nodes) onts += n.kind == NodeKind::Ont;
    const auto errors = std::count_if(all.begin(), all.end(), [](const Violation& v) { return v.severity == Severity::Error; });
    const bool failed = errors > 0;
    auto vj = violations_json(std::move(all));
    json results = {{"trees", plan.trees.size()},
                    {"nodes", plan.nodes.size()},
                    {"segments", plan.segments.size()},
                    {"onts", onts},
                    {"errors", errors},
                    {"warnings", static_cast<std::ptrdiff_t>(vj.size()) - errors},
                    {"valid", !failed}};
    print(out, report("validate", digest_inputs({a.bundle}), std::move(results), std::move(vj)));
    return failed ? kDomainError : kOk;
}

// ---------------------------------------------------------------------------

struct BudgetArgs {
    std::string bundle;
    std::optional<std::string> model;
    std::optional<std::string> ont;
    bool worst_case = false;
    std::optional<std::string> compare;
    std::optional<std::string> annotate_dir;
    std::string format = "json";
};

int cmd_budget(const BudgetArgs& a, const Shared& s, std::ostream& out) {
    const auto model = budget::resolve_model(a.model.value_or(s.config.model));
    const auto& th = s.config.thresholds;
    auto plan = geo::load_plan(fs::path(a.bundle));
    std::vector<std::string> inputs = {a.bundle};
    if (a.model && fs::exists(*a.model)) inputs.push_back(*a.model);

    if (auto errors = topology_errors(plan, s.config); !errors.empty()) {
        print(out, report("budget", digest_inputs(inputs), nullptr, violations_json(std::move(errors))));
        return kDomainError;
    }

    // every working path, ordered by ONT id then PON port
    std::vector<std::pair<std::string, PathDescriptor>> paths;
    for (const auto& tree : plan.trees)
        for (auto& p : ont_paths(tree)) paths.emplace_back(tree.root_port, std::move(p));
    std::sort(paths.begin(), paths.end(), [](const auto& x, const auto& y) {
        return std::tie(x.second.ont_id, x.first) < std::tie(y.second.ont_id, y.first);
    });

    json rows = json::array();
    if (a.ont) {
        bool found = false;
        for (const auto& [port, p] : paths) {
            if (p.ont_id != *a.ont) continue;
            rows.push_back(ont_budget_json(p, port, model, th));
            found = true;
        }
        if (!found) {
            const auto* n = plan.find_node(*a.ont);
            if (!n || n->kind != NodeKind::Ont) throw Error(ErrorCode::UnknownOnt, "no ONT '" + *a.ont + "' in the plan");
            throw Error(ErrorCode::DisconnectedOnt, "ONT '" + *a.ont + "' is not reachable from an OLT");
        }
    } else if (a.worst_case) {
        std::optional<budget::OntBudget> worst;
        std::string worst_port;
        for (const auto& tree : plan.trees) {
            if (tree.ont_ids().empty()) continue;
            auto w = budget::worst_case_ont(tree, model);
            if (!worst || w.loss.total_db > worst->loss.total_db ||
                (w.loss.total_db == worst->loss.total_db && w.ont_id < worst->ont_id)) {
                worst = std::move(w);
                worst_port = tree.root_port;
            }
        }
        if (!worst) throw Error(ErrorCode::EmptyTree, "the plan has no reachable ONT");
        for (const auto& [port, p] : paths)
            if (port == worst_port && p.ont_id == worst->ont_id) rows.push_back(ont_budget_json(p, port, model, th));
    } else {
        for (const auto& [port, p] : paths) rows.push_back(ont_budget_json(p, port, model, th));
    }

    if (a.compare) {
        const auto other = budget::resolve_model(*a.compare);
        if (fs::exists(*a.compare)) inputs.push_back(*a.compare);
        for (auto& row : rows) {
            for (const auto& [port, p] : paths) {
                if (p.ont_id != row["ont"] || port != row["pon_port"]) continue;
                const auto cmp = budget::compare_models(p, model, other);
                row["comparison"] = {{"model", other.name},
                                     {"total_db", cmp.total_b_db.to_double()},
                                     {"relative_difference", cmp.relative_difference}};
            }
        }
    }

    if (a.annotate_dir) {
        planner::annotate_budget(plan, model, th);
        geo::write_bundle(geo::emit_plan(plan), *a.annotate_dir);
    }

    if (a.format == "csv") {
        out << "ont,pon_port,length_km,total_db,classification,attenuator_db\n";
        for (const auto& r : rows) {
            out << r["ont"].get<std::string>() << ',' << r["pon_port"].get<std::string>() << ','
                << Decimal::from_double(r["length_km"].get<double>()).to_fixed(3) << ','
                << Decimal::from_double(r["loss"]["total_db"].get<double>()).to_fixed(3) << ','
                << r["classification"].get<std::string>() << ','
                << (r["attenuator_db"].is_null() ? std::string()
                                                 : Decimal::from_double(r["attenuator_db"].get<double>()).to_fixed(3))
                << '\n';
        }
        return kOk;
    }
    json results = {{"model", model.name},
                    {"thresholds", {{"min_db", th.min_db.to_double()}, {"max_db", th.max_db.to_double()}}},
                    {"onts", std::move(rows)}};
    print(out, report("budget", digest_inputs(inputs), std::move(results)));
    return kOk;
}

// ---------------------------------------------------------------------------

struct ReachArgs {
    std::string splitters;
    int connectors = 0;
    int splices = 0;
    std::optional<std::string> passive_loss_db;
    std::optional<std::string> model;
};

int cmd_reach(const ReachArgs& a, const Shared& s, std::ostream& out) {
    const auto model = budget::resolve_model(a.model.value_or(s.config.model));
    const auto ratios = parse_ratios(a.splitters);
    const auto& th = s.config.thresholds;
    if (a.connectors < 0 || a.splices < 0) throw Error(ErrorCode::InvalidArgument, "counts must be nonnegative");

    int split = 1;
    Decimal splitter_db;
    for (auto r : ratios) {
        split *= ports(r);
        const auto loss = model.splitter_loss(r);
        if (!loss) throw Error(ErrorCode::UnknownSplitterRatio, "model '" + model.name + "' has no 1:" + std::to_string(ports(r)));
        splitter_db += *loss;
    }

    json inputs_j = json::object();
    if (a.model && fs::exists(*a.model)) inputs_j = digest_inputs({*a.model});

    Decimal passive_db;
    double reach = 0.0;
    json breakdown;
    try {
        if (a.passive_loss_db) {
            passive_db = parse_decimal(*a.passive_loss_db, "passive loss");
            reach = budget::max_reach_km(ratios, passive_db, model, th);
            breakdown = {{"passive_db", passive_db.to_double()}};
        } else {
            reach = budget::max_reach_km(ratios, a.connectors, a.splices, model, th);
            const auto c = model.connector_loss_db * a.connectors;
            const auto sp = model.splice_loss_db * a.splices;
            passive_db = c + sp;
            breakdown = {{"connector_db", c.to_double()}, {"splice_db", sp.to_double()}};
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoFeasibleReach) throw;
        const auto fixed = model.engineering_margin_db + splitter_db + passive_db;
        json results = {{"feasible", false},
                        {"fixed_loss_db", fixed.to_double()},
                        {"max_db", th.max_db.to_double()},
                        {"explanation", std::string(e.what())}};
        print(out, report("reach", std::move(inputs_j), std::move(results)));
        return kDomainError;
    }

    breakdown["splitter_db"] = splitter_db.to_double();
    breakdown["engineering_margin_db"] = model.engineering_margin_db.to_double();
    const bool unbounded = std::isinf(reach);
    breakdown["transmission_db"] = unbounded ? 0.0 : model.transmission_loss_db_per_km.to_double() * reach;
    breakdown["total_db"] = unbounded ? (model.engineering_margin_db + splitter_db + passive_db).to_double()
                                      : th.max_db.to_double();
    json results = {{"feasible", true},
                    {"model", model.name},
                    {"splitters", json::array()},
                    {"total_split", split},
                    {"max_reach_km", unbounded ? json(nullptr) : json(std::round(reach * 1e6) / 1e6)},
                    {"unbounded", unbounded},
                    {"bandwidth_per_tenant_mbps", dimensioning::bandwidth_per_tenant(s.config.downstream_mbps, split)},
                    {"loss_at_max_reach", std::move(breakdown)}};
    for (auto r : ratios) results["splitters"].push_back(to_string(r));
    print(out, report("reach", std::move(inputs_j), std::move(results)));
    return kOk;
}

// ---------------------------------------------------------------------------

struct DimensionArgs {
    std::optional<int> tenants;
    std::optional<int> split;
    std::optional<int> fibers;
    std::optional<std::string> olt;
};

int cmd_dimension(const DimensionArgs& a, const Shared& s, std::ostream& out) {
    if (!a.tenants && !a.olt) throw Error(ErrorCode::InvalidArgument, "give --tenants and --split, --olt, or both");
    json results = json::object();
    std::optional<int> ports_needed;
    if (a.tenants) {
        if (!a.split) throw Error(ErrorCode::InvalidArgument, "--tenants needs --split");
        const auto ratio = split_ratio_from_int(*a.split);
        if (!ratio) throw Error(ErrorCode::UnknownSplitterRatio, "1:" + std::to_string(*a.split) + " is not a supported ratio");
        const int demand = a.fibers.value_or(*a.tenants);
        const auto cable = dimensioning::cable_size(demand, s.config.ladder);
        ports_needed = dimensioning::pon_ports_required(*a.tenants, *a.split);
        results["tenants"] = *a.tenants;
        results["split"] = to_string(*ratio);
        results["splitters"] = dimensioning::splitter_count(*a.tenants, *ratio);
        results["pon_ports"] = *ports_needed;
        results["bandwidth_per_tenant_mbps"] = dimensioning::bandwidth_per_tenant(s.config.downstream_mbps, *a.split);
        results["cable"] = {{"demand_fibers", demand}, {"cables", cable.cables}, {"total_fibers", cable.total_fibers()}};
    }
    if (a.olt) {
        dimensioning::OltCapacity cap;
        char c1 = 0, c2 = 0;
        std::istringstream in(*a.olt);
        if (!(in >> cap.sub_racks >> c1 >> cap.cards_per_sub_rack >> c2 >> cap.ports_per_card) || c1 != ',' || c2 != ',' ||
            !(in >> std::ws).eof())
            throw Error(ErrorCode::InvalidArgument, "--olt takes \"sub_racks,cards_per_sub_rack,ports_per_card\"");
        const int total = dimensioning::olt_total_ports(cap);
        json olt = {{"sub_racks", cap.sub_racks},
                    {"cards_per_sub_rack", cap.cards_per_sub_rack},
                    {"ports_per_card", cap.ports_per_card},
                    {"total_ports", total}};
        if (ports_needed) {
            olt["used_ports"] = *ports_needed;
            olt["utilization_percent"] = 100.0 * *ports_needed / total;
            olt["fits"] = *ports_needed <= total;
        }
        results["olt"] = std::move(olt);
    }
    print(out, report("dimension", json::object(), std::move(results)));
    return kOk;
}

// ---------------------------------------------------------------------------

struct GeorefArgs {
    std::string points;
};

int cmd_georef(const GeorefArgs& a, std::ostream& out) {
    json j;
    try {
        j = json::parse(read_bytes(a.points));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, "'" + a.points + "' is not JSON: " + e.what());
    }
    std::vector<geo::ControlPoint> pts;
    try {
        for (const auto& p : j.at("points"))
            pts.push_back({{p.at("source").at(0).get<double>(), p.at("source").at(1).get<double>()},
                           {p.at("target").at(0).get<double>(), p.at("target").at(1).get<double>()}});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError,
                    "control points must be {\"points\": [{\"source\": [x, y], \"target\": [lon, lat]}]}: " +
                        std::string(e.what()));
    }
    const auto fit = geo::fit_affine(pts);
    const auto& t = fit.transform;
    json results = {{"points", pts.size()},
                    {"transform", {{"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}, {"tx", t.tx}, {"ty", t.ty}}},
                    {"rms_residual", fit.rms_residual},
                    {"warnings", fit.warnings}};
    print(out, report("georef", digest_inputs({a.points}), std::move(results)));
    return kOk;
}

// ---------------------------------------------------------------------------

struct BomArgs {
    std::string bundle;
    std::string format = "json";
    std::optional<std::string> model;
};

int cmd_bom(const BomArgs& a, const Shared& s, std::ostream& out) {
    const auto plan = geo::load_plan(fs::path(a.bundle));
    dimensioning::BomOptions opts;
    opts.topology = {s.config.split_cap, s.config.ladder};
    opts.model = budget::resolve_model(a.model.value_or(s.config.model));
    opts.thresholds = s.config.thresholds;
    try {
        const auto b = dimensioning::bom(plan, opts);
        if (a.format == "csv") {
            out << b.to_csv();
        } else {
            print(out, report("bom", digest_inputs({a.bundle}), b.to_json()));
        }
        return kOk;
    } catch (const dimensioning::InvalidPlanError& e) {
        print(out, report("bom", digest_inputs({a.bundle}), nullptr, violations_json(e.violations())));
        return kDomainError;
    }
}

// ---------------------------------------------------------------------------

struct TemplateArgs {
    std::string kind;
    std::optional<int> tenants;
    std::optional<std::string> split;
    std::optional<std::string> feeder_km, distribution_km, drop_km;
    std::optional<int> reach;
    std::optional<std::string> out_dir;
};

int cmd_template(const TemplateArgs& a, const Shared& s, std::ostream& out) {
    const auto kind = planner::scenario_kind_from_string(a.kind);
    if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + a.kind + "'");
    auto p = planner::scenario_defaults(*kind);
    p.drum_length_km = s.config.drum_length_km;
    if (a.tenants) p.tenants = *a.tenants;
    if (a.split) {
        p.split_ratios.clear();
        for (auto r : parse_ratios(*a.split)) p.split_ratios.push_back(ports(r));
    }
    if (a.feeder_km) p.feeder_km = parse_decimal(*a.feeder_km, "feeder length");
    if (a.distribution_km) p.distribution_km = parse_decimal(*a.distribution_km, "distribution length");
    if (a.drop_km) p.drop_km = parse_decimal(*a.drop_km, "drop length");
    if (a.reach) p.reach_limit_km = *a.reach;

    const auto plan = planner::scenario_template(*kind, p);
    std::size_t onts = 0;
    for (const auto& n : plan.nodes) onts += n.kind == NodeKind::Ont;
    json results = {{"scenario", planner::to_string(*kind)}, {"onts", onts}, {"nodes", plan.nodes.size()},
                    {"segments", plan.segments.size()}};
    if (a.out_dir) {
        const auto bundle = geo::emit_plan(plan);
        geo::write_bundle(bundle, *a.out_dir);
        json files = json::array({"manifest.json"});
        for (const auto& [name, text] : bundle.files) files.push_back(name);
        results["written"] = {{"directory", *a.out_dir}, {"files", files}};
    } else {
        results["bundle"] = geo::emit_plan_inline(plan);
    }
    print(out, report("template", json::object(), std::move(results)));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"FTTH GPON optical distribution network planner", "odn-planner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ODN_PLANNER_VERSION);
    Shared shared;
    app.add_option("--config", shared.config_path, "Defaults file (overrides ODN_PLANNER_CONFIG)");

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Check topology and planning rules");
    validate->add_option("bundle", va.bundle, "Bundle manifest or directory")->required();
    validate->add_option("--setting", va.setting, "centralized | dispersed | n-level:N");

    BudgetArgs ba;
    auto* budget_cmd = app.add_subcommand("budget", "Optical power budget per ONT");
    budget_cmd->add_option("bundle", ba.bundle, "Bundle manifest or directory")->required();
    budget_cmd->add_option("--model", ba.model, "theoretical | practical | model file");
    auto* ont_opt = budget_cmd->add_option("--ont", ba.ont, "Single ONT id");
    budget_cmd->add_flag("--worst-case", ba.worst_case, "Only the farthest tenant")->excludes(ont_opt);
    budget_cmd->add_option("--compare", ba.compare, "Second model to compare against");
    budget_cmd->add_option("--annotate", ba.annotate_dir, "Write the plan with budget properties to this directory");
    budget_cmd->add_option("--format", ba.format)->check(CLI::IsMember({"json", "csv"}));

    ReachArgs ra;
    auto* reach = app.add_subcommand("reach", "Maximum reach for a splitter stack");
    reach->add_option("--splitters", ra.splitters, "Ratios from the OLT side, e.g. 64 or 2,32")->required();
    auto* conn = reach->add_option("--connectors", ra.connectors)->check(CLI::NonNegativeNumber);
    auto* spl = reach->add_option("--splices", ra.splices)->check(CLI::NonNegativeNumber);
    reach->add_option("--passive-loss-db", ra.passive_loss_db, "Measured connector and splice loss")
        ->excludes(conn)
        ->excludes(spl);
    reach->add_option("--model", ra.model, "theoretical | practical | model file");

    DimensionArgs da;
    auto* dimension = app.add_subcommand("dimension", "Splitters, PON ports, cable and OLT sizing");
    dimension->add_option("--tenants", da.tenants)->check(CLI::PositiveNumber);
    dimension->add_option("--split", da.split);
    dimension->add_option("--fibers", da.fibers, "Fiber demand for the cable suggestion (default: tenants)")
        ->check(CLI::PositiveNumber);
    dimension->add_option("--olt", da.olt, "\"sub_racks,cards_per_sub_rack,ports_per_card\"");

    GeorefArgs ga;
    auto* georef = app.add_subcommand("georef", "Affine fit from control points");
    georef->add_option("--points", ga.points, "Control-point file")->required();

    BomArgs bo;
    auto* bom = app.add_subcommand("bom", "Bill of materials");
    bom->add_option("bundle", bo.bundle, "Bundle manifest or directory")->required();
    bom->add_option("--format", bo.format)->check(CLI::IsMember({"json", "csv"}));
    bom->add_option("--model", bo.model, "Model used to count attenuators");

    TemplateArgs ta;
    auto* tmpl = app.add_subcommand("template", "Generate a scenario skeleton");
    tmpl->add_option("kind", ta.kind, "villas-outdoor-fdh | high-rise-indoor-fdh | small-building-wall-fdh | small-building-outdoor-fdh")
        ->required();
    tmpl->add_option("--tenants", ta.tenants);
    tmpl->add_option("--split", ta.split);
    tmpl->add_option("--feeder-km", ta.feeder_km);
    tmpl->add_option("--distribution-km", ta.distribution_km);
    tmpl->add_option("--drop-km", ta.drop_km);
    tmpl->add_option("--reach", ta.reach);
    tmpl->add_option("--out", ta.out_dir, "Write the bundle here instead of printing it");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("odn-planner");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        shared.config = shared.config_path.empty() ? config_from_env() : load_config(shared.config_path);
        if (*validate) return cmd_validate(va, shared, out);
        if (*budget_cmd) return cmd_budget(ba, shared, out);
        if (*reach) return cmd_reach(ra, shared, out);
        if (*dimension) return cmd_dimension(da, shared, out);
        if (*georef) return cmd_georef(ga, out);
        if (*bom) return cmd_bom(bo, shared, out);
        if (*tmpl) return cmd_template(ta, shared, out);
    } catch (const geo::PlanLoadError& e) {
        err << "odn-planner: " << e.what() << '\n';
        for (const auto& d : e.diagnostics())
            err << "  " << to_string(d.code) << " [" << d.layer << (d.feature_id.empty() ? "" : "/" + d.feature_id)
                << "] " << d.message << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "odn-planner: " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "odn-planner: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace odn::cli
