#include "builders.hpp"

#include "odn/error.hpp"
#include "odn/topology.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace odn;
using namespace odn::literals;
using support::node;
using support::seg;
using support::splitter;

namespace {

bool has_code(const std::vector<Violation>& vs, ViolationCode code) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

PonTree chain_64() {
    PonTree t;
    t.root_port = "pon-1";
    t.nodes = {node("olt", NodeKind::CentralOfficeOlt), node("fdh", NodeKind::Fdh), node("ont", NodeKind::Ont)};
    t.segments = {seg("f", "olt", "fdh", CableRole::Feeder, "4.9"), seg("d", "fdh", "ont", CableRole::Drop, "0.1")};
    t.splitters = {splitter("fdh", SplitRatio::R64, 1)};
    return t;
}

// OLT -> FDH[1:4] -> FAT[1:16] -> ONT
PonTree two_level() {
    PonTree t;
    t.root_port = "pon-1";
    t.nodes = {node("olt", NodeKind::CentralOfficeOlt), node("fdh", NodeKind::Fdh), node("fat", NodeKind::Fat),
               node("ont", NodeKind::Ont)};
    t.segments = {seg("f", "olt", "fdh", CableRole::Feeder, "2"), seg("d", "fdh", "fat", CableRole::Distribution, "0.5"),
                  seg("x", "fat", "ont", CableRole::Drop, "0.05")};
    t.splitters = {splitter("fdh", SplitRatio::R4, 1), splitter("fat", SplitRatio::R16, 2)};
    return t;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("minimal OLT to 1:64 to ONT chain of 5 km is valid") {
    CHECK(validate_topology(chain_64()).empty());
    CHECK(path_to_ont(chain_64(), "ont").length_km == 5_dec);
}

TEST_CASE("a loop between two joint boxes is reported") {
    PonTree t;
    t.root_port = "pon-1";
    t.nodes = {node("olt", NodeKind::CentralOfficeOlt), node("fdh", NodeKind::Fdh), node("jb-1", NodeKind::JointBox),
               node("jb-2", NodeKind::JointBox), node("ont", NodeKind::Ont)};
    t.segments = {seg("f", "olt", "fdh", CableRole::Feeder, "1"), seg("d1", "fdh", "jb-1", CableRole::Distribution, "0.2"),
                  seg("d2", "fdh", "jb-2", CableRole::Distribution, "0.2"),
                  seg("d3", "jb-1", "jb-2", CableRole::Distribution, "0.3"),
                  seg("x", "jb-1", "ont", CableRole::Drop, "0.05")};
    t.splitters = {splitter("fdh", SplitRatio::R8, 1)};
    const auto vs = validate_topology(t);
    REQUIRE(has_code(vs, ViolationCode::CycleDetected));
    CHECK(std::count_if(vs.begin(), vs.end(), [](const Violation& v) { return v.code == ViolationCode::CycleDetected; }) == 1);
}

TEST_CASE("1:8 then 1:16 exceeds the split cap of 64 but not 128") {
    auto t = two_level();
    t.splitters = {splitter("fdh", SplitRatio::R8, 1), splitter("fat", SplitRatio::R16, 2)};
    auto vs = validate_topology(t);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].code == ViolationCode::SplitCapExceeded);
    CHECK(vs[0].subject_id == "ont");
    CHECK(vs[0].severity == Severity::Error);
    CHECK(validate_topology(t, TopologyOptions{128, {}}).empty());
}

TEST_CASE("path aggregation") {
    SUBCASE("feeder and drop behind one 1:32") {
        PonTree t;
        t.root_port = "p";
        t.nodes = {node("olt", NodeKind::CentralOfficeOlt), node("fdh", NodeKind::Fdh), node("ont", NodeKind::Ont)};
        t.segments = {seg("f", "olt", "fdh", CableRole::Feeder, "3", 2), seg("d", "fdh", "ont", CableRole::Drop, "1", 1)};
        t.splitters = {splitter("fdh", SplitRatio::R32, 1)};
        const auto p = path_to_ont(t, "ont");
        CHECK(p.length_km == 4_dec);
        CHECK(p.splice_count == 3);
        CHECK(p.ratios() == std::vector<SplitRatio>{SplitRatio::R32});
        CHECK(p.node_ids == std::vector<std::string>{"olt", "fdh", "ont"});
        CHECK(p.segment_ids == std::vector<std::string>{"f", "d"});
    }
    SUBCASE("drop straight from the OLT") {
        PonTree t;
        t.root_port = "p";
        t.nodes = {node("olt", NodeKind::CentralOfficeOlt), node("ont", NodeKind::Ont)};
        t.segments = {seg("d", "olt", "ont", CableRole::Drop, "0.4")};
        const auto p = path_to_ont(t, "ont");
        CHECK(p.length_km == 0.4_dec);
        CHECK(p.splitters.empty());
        CHECK(total_split(p) == 1);
        CHECK(validate_topology(t).empty());
    }
    SUBCASE("two levels multiply") {
        const auto p = path_to_ont(two_level(), "ont");
        CHECK(p.ratios() == std::vector<SplitRatio>{SplitRatio::R4, SplitRatio::R16});
        CHECK(total_split(two_level(), "ont") == 64);
    }
    SUBCASE("segment direction does not matter") {
        auto t = two_level();
        std::swap(t.segments[1].from_node, t.segments[1].to_node);
        CHECK(path_to_ont(t, "ont").length_km == 2.55_dec);
    }
}

TEST_CASE("total split examples") {
    CHECK(total_split(chain_64(), "ont") == 64);
    auto t = chain_64();
    t.splitters = {splitter("olt", SplitRatio::R2, 1), splitter("fdh", SplitRatio::R32, 2)};
    CHECK(total_split(t, "ont") == 64);
}

TEST_CASE("path errors") {
    const auto t = chain_64();
    CHECK_THROWS_WITH_AS(path_to_ont(t, "nope"), doctest::Contains("UnknownOnt"), Error);
    CHECK_THROWS_AS(path_to_ont(t, "fdh"), Error);
    auto lonely = t;
    lonely.nodes.push_back(node("ont-2", NodeKind::Ont));
    try {
        path_to_ont(lonely, "ont-2");
        FAIL("expected DisconnectedOnt");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DisconnectedOnt);
    }
    CHECK(has_code(validate_topology(lonely), ViolationCode::DisconnectedNode));
}

TEST_CASE("structural violations") {
    SUBCASE("no root") {
        auto t = chain_64();
        t.nodes[0].kind = NodeKind::Fdh;
        CHECK(has_code(validate_topology(t), ViolationCode::MissingRoot));
        CHECK(ont_paths(t).empty());
    }
    SUBCASE("two roots") {
        auto t = chain_64();
        t.nodes.push_back(node("olt-2", NodeKind::CentralOfficeOlt));
        CHECK(has_code(validate_topology(t), ViolationCode::MultipleRoots));
    }
    SUBCASE("duplicate ids") {
        auto t = chain_64();
        t.nodes.push_back(node("ont", NodeKind::Ont));
        CHECK(has_code(validate_topology(t), ViolationCode::DuplicateId));
    }
    SUBCASE("unknown endpoint is a violation, not an exception") {
        auto t = chain_64();
        t.segments.push_back(seg("ghost", "fdh", "nowhere", CableRole::Drop, "0.1"));
        CHECK(has_code(validate_topology(t), ViolationCode::UnknownNodeReference));
    }
    SUBCASE("coordinates outside WGS84") {
        auto t = chain_64();
        t.nodes[2].position = {181.0, 0.0};
        CHECK(has_code(validate_topology(t), ViolationCode::InvalidCoordinate));
    }
    SUBCASE("reach limit must be 10 or 20") {
        auto t = chain_64();
        t.physical_reach_limit_km = 15;
        CHECK(has_code(validate_topology(t), ViolationCode::InvalidReachLimit));
    }
    SUBCASE("reach exceeded at 10 km") {
        auto t = chain_64();
        t.segments[0].length_km = 10_dec;
        t.physical_reach_limit_km = 10;
        CHECK(has_code(validate_topology(t), ViolationCode::ReachExceeded));
        t.physical_reach_limit_km = 20;
        CHECK(validate_topology(t).empty());
    }
    SUBCASE("missing length") {
        auto t = chain_64();
        t.segments[1].length_km.reset();
        CHECK(has_code(validate_topology(t), ViolationCode::MissingLength));
        t.segments[1].geometry = {{55.27, 25.2}, {55.271, 25.2}};
        CHECK(validate_topology(t).empty());
    }
    SUBCASE("drop fiber count and ladder are warnings") {
        auto t = chain_64();
        t.segments[1].fiber_count = 4;
        t.segments[0].fiber_count = 12;
        const auto vs = validate_topology(t);
        CHECK(has_code(vs, ViolationCode::DropFiberCount));
        CHECK(has_code(vs, ViolationCode::NonStandardFiberCount));
        CHECK_FALSE(has_errors(vs));
        t.segments[0].nonstandard = t.segments[1].nonstandard = true;
        CHECK(validate_topology(t).empty());
    }
    SUBCASE("two inputs need protection") {
        auto t = chain_64();
        t.splitters[0].input_ports = 2;
        CHECK(has_code(validate_topology(t), ViolationCode::DualInputWithoutProtection));
        t.protection = ProtectionType::TypeB;
        CHECK(validate_topology(t).empty());
    }
    SUBCASE("levels must increase along the path") {
        auto t = two_level();
        t.splitters[1].level = 1;
        CHECK(has_code(validate_topology(t), ViolationCode::SplitterLevelOrder));
        t.splitters[1].level = 4;
        CHECK(has_code(validate_topology(t), ViolationCode::InvalidSplitter));
    }
    SUBCASE("splitter at an ONT") {
        auto t = chain_64();
        t.splitters.push_back(splitter("ont", SplitRatio::R2, 2));
        CHECK(has_code(validate_topology(t), ViolationCode::InvalidSplitter));
    }
}

TEST_CASE("standby segments stay off working paths") {
    auto t = chain_64();
    t.nodes.push_back(node("mh", NodeKind::Manhole));
    auto a = seg("s1", "olt", "mh", CableRole::Feeder, "1");
    auto b = seg("s2", "mh", "fdh", CableRole::Feeder, "1");
    a.standby = b.standby = true;
    t.segments.push_back(a);
    t.segments.push_back(b);
    t.protection = ProtectionType::TypeB;
    CHECK(validate_topology(t).empty());
    CHECK(path_to_ont(t, "ont").segment_ids == std::vector<std::string>{"f", "d"});
}

TEST_CASE("property: a valid tree yields a path to every ONT and at most one port's worth of split") {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 300; ++i) {
        const auto t = support::random_valid_tree(rng);
        const auto vs = validate_topology(t);
        REQUIRE_MESSAGE(vs.empty(), "tree " << i << ": " << (vs.empty() ? "" : vs.front().message));
        double share = 0.0;
        for (const auto& id : t.ont_ids()) {
            const auto p = path_to_ont(t, id);
            CHECK(p.node_ids.front() == "olt");
            CHECK(p.node_ids.back() == id);
            share += 1.0 / total_split(p);
        }
        CHECK(share <= 1.0 + 1e-12);
        CHECK(ont_paths(t).size() == t.ont_ids().size());
    }
}

TEST_CASE("property: total split ignores the order of siblings") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const auto t = support::random_valid_tree(rng);
        auto shuffled = t;
        std::shuffle(shuffled.segments.begin(), shuffled.segments.end(), rng);
        std::shuffle(shuffled.nodes.begin(), shuffled.nodes.end(), rng);
        for (const auto& id : t.ont_ids()) CHECK(total_split(t, id) == total_split(shuffled, id));
    }
}

}
