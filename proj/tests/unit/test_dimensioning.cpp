#include "builders.hpp"

#include "odn/dimensioning.hpp"
#include "odn/error.hpp"
#include "odn/plan.hpp"

#include <doctest.h>

#include <set>

using namespace odn;
using namespace odn::dimensioning;
using namespace odn::literals;

namespace {

// Disjoint union of two layer sets; ids of the second are already prefixed.
std::map<std::string, nlohmann::json> merge(std::map<std::string, nlohmann::json> a,
                                            const std::map<std::string, nlohmann::json>& b) {
    for (const auto& [name, fc] : b) {
        auto& target = a[name];
        if (target.is_null()) target = {{"type", "FeatureCollection"}, {"features", nlohmann::json::array()}};
        for (const auto& f : fc["features"]) target["features"].push_back(f);
    }
    return a;
}

}  // namespace

TEST_SUITE("dimensioning") {

TEST_CASE("splitter count") {
    CHECK(splitter_count(64, SplitRatio::R64) == 1);
    CHECK(splitter_count(1000, SplitRatio::R32) == 32);
    CHECK(splitter_count(1, SplitRatio::R64) == 1);
    CHECK_THROWS_AS(splitter_count(0, SplitRatio::R2), Error);
}

TEST_CASE("property: splitter count is the least sufficient count") {
    for (auto r : kAllSplitRatios) {
        for (int t = 1; t <= 2000; ++t) {
            const int n = splitter_count(t, r);
            REQUIRE(n * ports(r) >= t);
            REQUIRE((n - 1) * ports(r) < t);
        }
    }
}

TEST_CASE("cable size") {
    CHECK(cable_size(20).cables == std::vector<int>{24});
    CHECK(cable_size(8).cables == std::vector<int>{8});
    CHECK(cable_size(90).cables == std::vector<int>{96});
    CHECK(cable_size(1).cables == std::vector<int>{2});
    CHECK(cable_size(7).cables == std::vector<int>{8});
    // 12 x 1.25 = 15, nearest is 16
    CHECK(cable_size(12).cables == std::vector<int>{16});
    // 25 is equidistant from 24 and 26
    CHECK(cable_size(20, CableLadder({2, 24, 26, 48})).cables == std::vector<int>{26});
    CHECK(cable_size(200).cables == std::vector<int>{96, 96, 8});
    CHECK(cable_size(200).total_fibers() == 200);
    CHECK_FALSE(cable_size(200).single());
    CHECK_THROWS_AS(cable_size(0), Error);
}

TEST_CASE("property: cable size never falls below demand and stays on the ladder") {
    const CableLadder ladder;
    for (int d = 1; d <= 1000; ++d) {
        const auto sel = cable_size(d);
        REQUIRE(sel.total_fibers() >= d);
        for (int c : sel.cables) REQUIRE(ladder.contains(c));
        if (d <= ladder.largest()) REQUIRE(sel.single());
    }
}

TEST_CASE("bandwidth and ports") {
    CHECK(bandwidth_per_tenant(2400, 64) == 37.5);
    CHECK(bandwidth_per_tenant(2400, 32) == 75.0);
    CHECK(bandwidth_per_tenant(2400, 1) == 2400.0);
    CHECK_THROWS_AS(bandwidth_per_tenant(2400, 0), Error);
    for (int a : {1, 2, 4, 8}) {
        for (int b : {1, 2, 4, 8, 16}) {
            CHECK(bandwidth_per_tenant(2400, a * b) == bandwidth_per_tenant(bandwidth_per_tenant(2400, a), b));
        }
    }
    CHECK(pon_ports_required(256, 64) == 4);
    CHECK(pon_ports_required(65, 64) == 2);
    CHECK(pon_ports_required(64, 32) == 2);
    CHECK(olt_total_ports({2, 16, 8}) == 256);
    CHECK(olt_total_ports({3, 16, 4}) == 192);
    CHECK(olt_total_ports({2, 16, 4}) == 128);
    CHECK_THROWS_AS(olt_total_ports({4, 16, 8}), Error);
    CHECK_THROWS_AS(olt_total_ports({2, 16, 6}), Error);
}

TEST_CASE("bill of materials for the minimal fixture") {
    const auto plan = geo::load_plan(support::kFixtures / "minimal");
    const auto b = bom(plan);
    const std::vector<BomItem> expected = {
        {"splitter 1:2", "pcs", 0_dec},        {"splitter 1:4", "pcs", 0_dec},
        {"splitter 1:8", "pcs", 0_dec},        {"splitter 1:16", "pcs", 0_dec},
        {"splitter 1:32", "pcs", 1_dec},       {"splitter 1:64", "pcs", 0_dec},
        {"equipment olt", "pcs", 1_dec},       {"equipment fdh", "pcs", 1_dec},
        {"equipment fat", "pcs", 0_dec},       {"equipment micro_odf", "pcs", 0_dec},
        {"structure joint_box", "pcs", 0_dec}, {"structure manhole", "pcs", 0_dec},
        {"structure handhole", "pcs", 0_dec},  {"equipment ont", "pcs", 32_dec},
        {"connectors", "pcs", 33_dec},         {"splices", "pcs", 34_dec},
        {"attenuators", "pcs", 0_dec},         {"pon_ports", "pcs", 1_dec},
        {"cable feeder 48F", "km", 3_dec},     {"cable drop 2F", "km", 3.2_dec},
    };
    CHECK(b.items == expected);
    CHECK(b.to_csv().rfind("item,unit,quantity\nsplitter 1:2,pcs,0\n", 0) == 0);
    CHECK(b.to_csv().find("cable drop 2F,km,3.200\n") != std::string::npos);
    CHECK(b.to_json()["items"][19]["quantity"] == 3.2);
}

TEST_CASE("empty plan gives an all-zero bill") {
    const auto b = bom(geo::assemble_plan({}));
    REQUIRE_FALSE(b.items.empty());
    for (const auto& i : b.items) CHECK(i.quantity == Decimal{});
}

TEST_CASE("protected feeder counts both routes") {
    const auto plan = geo::load_plan(support::kFixtures / "type_b.json");
    REQUIRE(plan.trees.size() == 1);
    CHECK(plan.trees[0].protection == ProtectionType::TypeB);
    const auto b = bom(plan);
    CHECK(b.quantity("cable feeder 8F") == 7_dec);
    CHECK(b.quantity("splitter 2:8") == 1_dec);
    CHECK(b.quantity("splitter 1:8") == 0_dec);
    CHECK(b.quantity("pon_ports") == 2_dec);
    CHECK(b.quantity("structure manhole") == 2_dec);
}

TEST_CASE("short links need attenuators") {
    const auto tree = support::star_tree(SplitRatio::R2, "0.3", {"0.1", "0.2"});
    const auto b = bom(support::plan_of(tree));
    CHECK(b.quantity("attenuators") == 2_dec);
}

TEST_CASE("an invalid plan is refused with its violations") {
    const auto plan = geo::load_plan(support::kFixtures / "cycle.json");
    try {
        bom(plan);
        FAIL("expected InvalidPlanError");
    } catch (const InvalidPlanError& e) {
        CHECK(e.code() == ErrorCode::InvalidPlan);
        REQUIRE_FALSE(e.violations().empty());
        CHECK(e.violations()[0].code == ViolationCode::CycleDetected);
    }
}

TEST_CASE("property: the bill is additive over disjoint trees") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto a = support::random_valid_tree(rng);
        const auto b = support::random_valid_tree(rng);
        const auto la = support::tree_layers(a, "a-");
        const auto lb = support::tree_layers(b, "b-");
        const auto ba = bom(geo::assemble_plan(la));
        const auto bb = bom(geo::assemble_plan(lb));
        const auto both = bom(geo::assemble_plan(merge(la, lb)));
        std::set<std::string> names;
        for (const auto* x : {&ba, &bb, &both})
            for (const auto& item : x->items) names.insert(item.item);
        for (const auto& n : names) CHECK_MESSAGE(both.quantity(n) == ba.quantity(n) + bb.quantity(n), n);
    }
}

}
