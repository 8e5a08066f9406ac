// One line per acceptance criterion; exit status is the number of failures.

#include "builders.hpp"

#include "odn/dimensioning.hpp"
#include "odn/error.hpp"
#include "odn/georef.hpp"
#include "odn/loss_model.hpp"
#include "odn/plan.hpp"
#include "odn/planner.hpp"
#include "odn/power_budget.hpp"
#include "odn/topology.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace odn;
using namespace odn::literals;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Loss coefficient tables as published, in hundredths of a dB: {TL/km, splice, connector, 1:2..1:64, EM}.
struct Printed {
    const char* name;
    long long tl, splice, connector;
    long long split[6];
    long long em;
};
constexpr Printed kTheoretical{"theoretical", 35, 10, 20, {350, 720, 1050, 1350, 1700, 1970}, 300};
constexpr Printed kPractical{"practical", 36, 5, 21, {348, 715, 1069, 1372, 1713, 1980}, 300};

int ratio_index(SplitRatio r) {
    int i = 0;
    for (int p = 2; p < ports(r); p *= 2) ++i;
    return i;
}

// Exact total in units of 1e-5 dB: hundredths x metres for the fiber, hundredths x 1000 for the rest.
__int128 oracle_total(const Printed& t, long long metres, int connectors, int splices, const std::vector<SplitRatio>& rs) {
    __int128 sum = static_cast<__int128>(t.tl) * metres;
    sum += static_cast<__int128>(t.connector) * connectors * 1000;
    sum += static_cast<__int128>(t.splice) * splices * 1000;
    for (auto r : rs) sum += static_cast<__int128>(t.split[ratio_index(r)]) * 1000;
    sum += static_cast<__int128>(t.em) * 1000;
    return sum;
}

PathDescriptor make_path(long long metres, int connectors, int splices, const std::vector<SplitRatio>& rs) {
    PathDescriptor p;
    p.ont_id = "ont";
    p.length_km = Decimal::from_raw(metres * 1'000'000);
    p.connector_count = connectors;
    p.splice_count = splices;
    int level = 1;
    for (auto r : rs) p.splitters.push_back({"s" + std::to_string(level), r, level, 1}), ++level;
    return p;
}

std::vector<SplitRatio> random_stack(std::mt19937_64& rng) {
    std::vector<SplitRatio> out;
    int product = 1;
    const int levels = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int l = 0; l < levels; ++l) {
        std::vector<SplitRatio> options;
        for (auto r : kAllSplitRatios)
            if (product * ports(r) <= 64) options.push_back(r);
        if (options.empty()) break;
        const auto r = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        out.push_back(r);
        product *= ports(r);
    }
    return out;
}

void criterion_1() {
    const auto t0 = Clock::now();
    const auto th = budget::theoretical_model();
    const auto pr = budget::practical_model();
    const double elapsed = ms_since(t0);
    bool ok = true;
    auto cents = [](long long v) { return Decimal::from_raw(v * 10'000'000); };
    for (const auto& [m, t] : {std::pair{&th, &kTheoretical}, std::pair{&pr, &kPractical}}) {
        ok &= m->name == t->name;
        ok &= m->transmission_loss_db_per_km == cents(t->tl);
        ok &= m->splice_loss_db == cents(t->splice);
        ok &= m->connector_loss_db == cents(t->connector);
        ok &= m->engineering_margin_db == cents(t->em);
        ok &= m->splitter_loss_db.size() == 6;
        for (auto r : kAllSplitRatios) {
            const auto v = m->splitter_loss(r);
            ok &= v && *v == cents(t->split[ratio_index(r)]) && v->to_fixed(2) == cents(t->split[ratio_index(r)]).to_fixed(2);
        }
    }
    ok &= elapsed < 1.0;
    report(1, "Loss coefficient presets", ok, fmt("26 coefficients x 2 presets exact; load %.3f ms (< 1 ms)", elapsed));
}

void criterion_2() {
    std::mt19937_64 rng(2024);
    const auto models = std::pair{budget::theoretical_model(), budget::practical_model()};
    double worst = 0.0;
    int exact = 0;
    for (int i = 0; i < 1000; ++i) {
        const long long metres = std::uniform_int_distribution<long long>(0, 25'000)(rng);
        const int c = std::uniform_int_distribution<int>(0, 12)(rng);
        const int s = std::uniform_int_distribution<int>(0, 40)(rng);
        const auto rs = random_stack(rng);
        const bool theo = i % 2 == 0;
        const auto& m = theo ? models.first : models.second;
        const auto total = budget::path_loss(make_path(metres, c, s, rs), m).total_db;
        const auto o = oracle_total(theo ? kTheoretical : kPractical, metres, c, s, rs);
        // 1e-5 dB units -> the library's 1e-9 raw scale
        exact += static_cast<__int128>(total.raw()) == o * 10'000;
        worst = std::max(worst, std::fabs(total.to_double() - static_cast<double>(o) / 1e5));
    }
    report(2, "Path loss against rational oracle", worst <= 1e-12 && exact == 1000,
           fmt("1000 paths, %d bit-exact, max |diff| %.3g dB (<= 1e-12)", exact, worst));
}

struct Scenario {
    int id;
    std::vector<SplitRatio> splitters;
    Decimal residual_db;
    double expected_km;
    int split;
    double expected_mbps;
};

const std::vector<Scenario> kScenarios = {
    {1, {SplitRatio::R64}, 1.87_dec, 9.8, 64, 37.5},
    {2, {SplitRatio::R2, SplitRatio::R32}, 2.82_dec, 4.8, 64, 37.5},
    {3, {SplitRatio::R2, SplitRatio::R4, SplitRatio::R8}, 3.52_dec, 0.8, 64, 37.5},
    {4, {SplitRatio::R2, SplitRatio::R16}, 3.1_dec, 14.0, 32, 75.0},
};

void criterion_3() {
    const auto& sc = kScenarios[0];
    const double reach = budget::max_reach_km(sc.splitters, sc.residual_db, budget::theoretical_model());
    const double mbps = dimensioning::bandwidth_per_tenant(dimensioning::kDefaultDownstreamMbps, 64);
    // the 9.8 km reconstruction fixture itself sits inside the budget
    const auto plan = geo::load_plan(support::kFixtures / "scenario1.json");
    const auto worst = budget::worst_case_ont(plan.trees.at(0), budget::theoretical_model());
    const bool fixture_ok = worst.loss.total_db <= 28_dec && path_to_ont(plan.trees[0], worst.ont_id).length_km == 9.8_dec;
    report(3, "Single 1:64 reach and bandwidth", std::fabs(reach - 9.8) <= 0.01 && mbps == 37.5 && fixture_ok,
           fmt("residual 1.87 dB -> %.6f km (9.8 +/- 0.01), %.1f Mb/s; fixture worst %s dB", reach, mbps,
               worst.loss.total_db.to_string().c_str()));
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    const auto th = budget::theoretical_model();
    const auto pr = budget::practical_model();
    for (std::size_t i = 1; i < kScenarios.size(); ++i) {
        const auto& sc = kScenarios[i];
        const double reach = budget::max_reach_km(sc.splitters, sc.residual_db, th);
        const double mbps = dimensioning::bandwidth_per_tenant(dimensioning::kDefaultDownstreamMbps, sc.split);
        ok &= std::fabs(reach - sc.expected_km) <= 0.01 && mbps == sc.expected_mbps;
        std::string stack;
        for (const auto r : sc.splitters) stack += (stack.empty() ? "1:" : "+1:") + std::to_string(ports(r));
        detail += fmt("%s%s %.6f km %.1f Mb/s", i > 1 ? "; " : "", stack.c_str(), reach, mbps);
    }
    // counts that reproduce the 1:2+1:16 residual exactly
    const double iv = budget::max_reach_km(kScenarios[3].splitters, 6, 19, th);
    ok &= std::fabs(iv - 14.0) <= 0.01;
    report(4, "Cascaded split reach", ok, detail);

    // model comparison, reported only
    for (const auto& sc : kScenarios) {
        auto path = make_path(static_cast<long long>(std::llround(sc.expected_km * 1000)), 0, 0, sc.splitters);
        if (sc.id == 4) path.connector_count = 6, path.splice_count = 19;
        const auto cmp = budget::compare_models(path, th, pr);
        std::printf("      case %d: theoretical %s dB, practical %s dB, relative difference %+.4f %% (not asserted)\n",
                    sc.id, cmp.total_a_db.to_string().c_str(), cmp.total_b_db.to_string().c_str(),
                    100.0 * cmp.relative_difference);
    }
}

void criterion_5() {
    std::mt19937_64 rng(5150);
    const budget::LossModel models[] = {budget::theoretical_model(), budget::practical_model()};
    int done = 0, exact = 0, over = 0, skipped = 0;
    double worst = 0.0;
    while (done < 500) {
        const auto rs = random_stack(rng);
        const int c = std::uniform_int_distribution<int>(0, 8)(rng);
        const int s = std::uniform_int_distribution<int>(0, 30)(rng);
        const auto& m = models[done % 2];
        double reach = 0.0;
        try {
            reach = budget::max_reach_km(rs, c, s, m);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoFeasibleReach) throw;
            ++skipped;
            continue;
        }
        auto path = make_path(0, c, s, rs);
        path.length_km = Decimal::from_double(reach);
        const auto at = budget::path_loss(path, m).total_db;
        const double diff = std::fabs(at.to_double() - 28.0);
        worst = std::max(worst, diff);
        exact += diff <= 1e-9;
        path.length_km += 0.001_dec;
        over += budget::classify_budget(budget::path_loss(path, m).total_db) == budget::BudgetClass::OutOfBudget;
        ++done;
    }
    report(5, "Reach inversion", exact == 500 && over == 500,
           fmt("500 feasible configs (%d infeasible skipped): max |loss - 28| %.2g dB, +1 m OutOfBudget %d/500",
               skipped, worst, over));
}

void criterion_6() {
    using budget::BudgetClass;
    const std::pair<const char*, BudgetClass> cases[] = {{"12.999", BudgetClass::NeedsAttenuator},
                                                         {"13.0", BudgetClass::InService},
                                                         {"28.0", BudgetClass::InService},
                                                         {"28.001", BudgetClass::OutOfBudget}};
    bool ok = true;
    std::string detail;
    for (const auto& [text, want] : cases) {
        const auto got = budget::classify_budget(Decimal::parse(text));
        ok &= got == want;
        detail += std::string(detail.empty() ? "" : ", ") + text + " " + std::string(budget::to_string(got));
    }
    report(6, "Class B+ partition", ok, detail);
}

void criterion_7() {
    bool ok = true;
    long long checked = 0;
    for (auto r : kAllSplitRatios) {
        for (int t = 1; t <= 10'000; ++t) {
            int n = 1;
            while (n * ports(r) < t) ++n;
            ok &= dimensioning::splitter_count(t, r) == n;
            ++checked;
        }
    }
    const auto c20 = dimensioning::cable_size(20);
    ok &= c20.cables == std::vector<int>{24};
    report(7, "Dimensioning", ok, fmt("splitter_count minimal on %lld cases; cable_size(20) = %dF", checked, c20.cables.front()));
}

void criterion_8() {
    const geo::AffineTransform truth{8.9e-6, 1.3e-7, -2.1e-7, 9.4e-6, 55.2708, 25.2048};
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> noise(-1e-6, 1e-6);
    std::vector<geo::ControlPoint> pts;
    for (auto [x, y] : {std::pair{0.0, 0.0}, {1200.0, 0.0}, {0.0, 900.0}, {1200.0, 900.0}, {600.0, 300.0}, {300.0, 700.0}}) {
        auto c = truth.apply({x, y});
        c.lon += noise(rng);
        c.lat += noise(rng);
        pts.push_back({{x, y}, c});
    }
    const auto fit = geo::fit_affine(pts);
    const auto& t = fit.transform;
    const double param_err = std::max({std::fabs(t.a - truth.a), std::fabs(t.b - truth.b), std::fabs(t.c - truth.c),
                                       std::fabs(t.d - truth.d), std::fabs(t.tx - truth.tx), std::fabs(t.ty - truth.ty)});

    const std::vector<geo::ControlPoint> three(pts.begin(), pts.begin() + 3);
    std::vector<geo::ControlPoint> exact3;
    for (const auto& p : three) exact3.push_back({p.source, truth.apply(p.source)});
    const auto fit3 = geo::fit_affine(exact3);
    const bool warned = fit3.warnings.size() == 1 && fit.warnings.empty();
    report(8, "Georeferencing", param_err < 1e-4 && fit.rms_residual <= 3e-6 && fit3.rms_residual <= 1e-12 && warned,
           fmt("param err %.2g (< 1e-4), rms %.2g (<= 3e-6); 3-point rms %.2g; <4-point warning %s", param_err,
               fit.rms_residual, fit3.rms_residual, warned ? "yes" : "no"));
}

void criterion_9() {
    int ok_count = 0, total = 0;
    bool unknown_kept = false;
    for (const char* name : {"minimal", "scenario1.json", "cycle.json", "type_b.json"}) {
        ++total;
        const auto plan = geo::load_plan(support::kFixtures / name);
        const auto dir = std::filesystem::temp_directory_path() / (std::string("odn-acceptance-") + name);
        std::filesystem::remove_all(dir);
        const auto bundle = geo::emit_plan(plan);
        geo::write_bundle(bundle, dir);
        const auto again = geo::load_plan(dir);
        const auto bundle2 = geo::emit_plan(again);
        if (again == plan && bundle2.files == bundle.files && bundle2.manifest == bundle.manifest) ++ok_count;
        if (std::string(name) == "minimal") {
            std::ifstream in(support::kFixtures / "minimal" / "survey_notes.geojson");
            unknown_kept = again.layers.count("survey_notes") && again.layers.at("survey_notes") == nlohmann::json::parse(in);
        }
        std::filesystem::remove_all(dir);
    }
    report(9, "GeoJSON round trip", ok_count == total && unknown_kept,
           fmt("%d/%d fixtures equal after emit+load, unknown layer preserved: %s", ok_count, total,
               unknown_kept ? "yes" : "no"));
}

void criterion_10(Clock::time_point suite_start) {
    const auto kind = planner::ScenarioKind::VillasOutdoorFdh;
    const auto plan = planner::scenario_template(kind, planner::scenario_defaults(kind));
    std::size_t violations = 0, in_service = 0, onts = 0;
    for (const auto& tree : plan.trees) {
        violations += validate_topology(tree).size();
        for (const auto& p : ont_paths(tree)) {
            ++onts;
            in_service += budget::classify_budget(budget::path_loss(p, budget::theoretical_model()).total_db) ==
                          budget::BudgetClass::InService;
        }
    }
    violations += planner::check_rules(plan).size();

    // 32 villas behind one 1:32 at the FDH, four joint boxes of eight drops;
    // 3 km feeder in two drum sections joined at one manhole.
    const std::vector<std::pair<std::string, Decimal>> hand = {
        {"splitter 1:2", 0_dec},      {"splitter 1:4", 0_dec},         {"splitter 1:8", 0_dec},
        {"splitter 1:16", 0_dec},     {"splitter 1:32", 1_dec},        {"splitter 1:64", 0_dec},
        {"equipment olt", 1_dec},     {"equipment fdh", 1_dec},        {"equipment fat", 0_dec},
        {"equipment micro_odf", 0_dec}, {"structure joint_box", 4_dec}, {"structure manhole", 1_dec},
        {"structure handhole", 0_dec}, {"equipment ont", 32_dec},      {"connectors", 34_dec},
        {"splices", 38_dec},          {"attenuators", 0_dec},          {"pon_ports", 1_dec},
        {"cable feeder 2F", 3_dec},   {"cable distribution 8F", 1.2_dec}, {"cable drop 2F", 3.2_dec},
    };
    const auto b = dimensioning::bom(plan);
    bool bom_ok = b.items.size() == hand.size();
    std::string mismatch;
    for (std::size_t i = 0; bom_ok && i < hand.size(); ++i) {
        if (b.items[i].item != hand[i].first || b.items[i].quantity != hand[i].second) {
            bom_ok = false;
            mismatch = " first mismatch: " + b.items[i].item + " = " + b.items[i].quantity.to_string();
        }
    }
    if (!bom_ok && mismatch.empty()) mismatch = fmt(" %zu items vs %zu hand-counted", b.items.size(), hand.size());
    const double elapsed_s = ms_since(suite_start) / 1000.0;
    report(10, "Villas end to end",
           onts == 32 && violations == 0 && in_service == 32 && bom_ok && elapsed_s < 60.0,
           fmt("%zu ONTs, %zu violations, %zu InService, BOM %s%s; suite %.2f s (< 60 s)", onts, violations, in_service,
               bom_ok ? "matches hand count" : "differs", mismatch.c_str(), elapsed_s));
}

}  // namespace

int main() {
    const auto start = Clock::now();
    const std::function<void()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                              criterion_6, criterion_7, criterion_8, criterion_9};
    int id = 1;
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            report(id, "criterion", false, std::string("threw: ") + e.what());
        }
        ++id;
    }
    try {
        criterion_10(start);
    } catch (const std::exception& e) {
        report(10, "Villas end to end", false, std::string("threw: ") + e.what());
    }
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
