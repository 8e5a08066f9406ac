#include "builders.hpp"

#include "odn/cli.hpp"
#include "odn/config.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
using odn::cli::run;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;

    json report() const { return json::parse(out); }
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string fixture(const std::string& name) { return (support::kFixtures / name).string(); }

std::string temp_file(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p.string();
}

bool has_violation(const json& report, const std::string& code) {
    for (const auto& v : report["violations"])
        if (v["code"] == code) return true;
    return false;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sha256") {
    CHECK(odn::cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(odn::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validate") {
    const auto ok = cli({"validate", fixture("minimal")});
    CHECK(ok.code == 0);
    const auto r = ok.report();
    CHECK(r["command"] == "validate");
    CHECK(r["version"] == "0.1.0");
    CHECK(r["results"]["valid"] == true);
    CHECK(r["results"]["errors"] == 0);
    CHECK(r["results"]["onts"] == 32);
    CHECK(r["inputs"].size() == 5);
    CHECK(has_violation(r, "DrumLengthWarning"));

    const auto cyc = cli({"validate", fixture("cycle.json")});
    CHECK(cyc.code == 2);
    CHECK(has_violation(cyc.report(), "CycleDetected"));

    CHECK(cli({"validate", "/nonexistent/plan.json"}).code == 1);
    const auto broken = cli({"validate", temp_file("odn-cli-broken.json", "{\"layers\": {\"equipment\": 5}}")});
    CHECK(broken.code == 1);
    CHECK(broken.err.find("SchemaError") != std::string::npos);

    const auto strict = cli({"validate", fixture("scenario1.json"), "--setting", "centralized"});
    CHECK(strict.code == 0);
}

TEST_CASE("reports are deterministic") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"validate", fixture("minimal")},
             {"budget", fixture("scenario1.json")},
             {"bom", fixture("type_b.json")},
             {"reach", "--splitters", "2,32", "--passive-loss-db", "2.82"}}) {
        const auto a = cli(args), b = cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("budget") {
    const auto worst = cli({"budget", fixture("scenario1.json"), "--worst-case"});
    REQUIRE(worst.code == 0);
    const auto r = worst.report();
    REQUIRE(r["results"]["onts"].size() == 1);
    const auto& row = r["results"]["onts"][0];
    CHECK(row["loss"]["total_db"] == 27.93);
    CHECK(row["loss"]["total_db"].get<double>() <= 28.0);
    CHECK(row["classification"] == "InService");
    CHECK(row["ont"] == "ont-001");

    const auto practical = cli({"budget", fixture("scenario1.json"), "--worst-case", "--model", "practical"});
    CHECK(practical.report()["results"]["onts"][0]["loss"]["total_db"] == 27.668);
    CHECK(practical.report()["results"]["model"] == "practical");

    const auto cmp = cli({"budget", fixture("scenario1.json"), "--ont", "ont-007", "--compare", "practical"});
    REQUIRE(cmp.code == 0);
    const auto cr = cmp.report();
    const auto& c = cr["results"]["onts"][0]["comparison"];
    CHECK(c["total_db"] == 27.668);
    CHECK(c["relative_difference"].get<double>() == doctest::Approx((27.93 - 27.668) / 27.93));

    CHECK(cli({"budget", fixture("scenario1.json")}).report()["results"]["onts"].size() == 64);
    CHECK(cli({"budget", fixture("scenario1.json"), "--ont", "ont-999"}).code == 1);
    CHECK(cli({"budget", fixture("scenario1.json"), "--ont", "fdh-001"}).code == 1);
    CHECK(cli({"budget", fixture("scenario1.json"), "--model", "imaginary"}).code == 1);
    CHECK(cli({"budget", fixture("cycle.json")}).code == 2);

    const auto csv = cli({"budget", fixture("minimal"), "--format", "csv", "--ont", "ont-001"});
    CHECK(csv.out == "ont,pon_port,length_km,total_db,classification,attenuator_db\n"
                     "ont-001,default,3.100,21.785,InService,\n");
}

TEST_CASE("budget annotation is written out") {
    const auto dir = std::filesystem::temp_directory_path() / "odn-cli-annotated";
    std::filesystem::remove_all(dir);
    REQUIRE(cli({"budget", fixture("minimal"), "--annotate", dir.string()}).code == 0);
    std::ifstream in(dir / "equipment.geojson");
    const auto fc = json::parse(in);
    int annotated = 0;
    for (const auto& f : fc["features"])
        if (f["properties"].contains("budget")) {
            ++annotated;
            CHECK(f["properties"]["budget"]["total_db"] == 21.785);
        }
    CHECK(annotated == 32);
    std::filesystem::remove_all(dir);
}

TEST_CASE("the environment supplies defaults") {
    const auto cfg = temp_file("odn-cli-config.json", R"({"thresholds": {"max_db": 27}})");
    ::setenv(odn::kConfigEnvVar, cfg.c_str(), 1);
    const auto r = cli({"budget", fixture("scenario1.json"), "--worst-case"});
    CHECK(r.report()["results"]["onts"][0]["classification"] == "OutOfBudget");
    ::setenv(odn::kConfigEnvVar, "/nonexistent/config.json", 1);
    CHECK(cli({"dimension", "--tenants", "8", "--split", "8"}).code == 1);
    ::unsetenv(odn::kConfigEnvVar);
    const auto flag = cli({"--config", cfg, "budget", fixture("scenario1.json"), "--worst-case"});
    CHECK(flag.report()["results"]["thresholds"]["max_db"] == 27.0);
}

TEST_CASE("reach") {
    const auto r64 = cli({"reach", "--splitters", "64"});
    REQUIRE(r64.code == 0);
    const auto rr = r64.report();
    const auto& res = rr["results"];
    CHECK(res["max_reach_km"] == 15.142857);
    CHECK(res["bandwidth_per_tenant_mbps"] == 37.5);
    CHECK(res["loss_at_max_reach"]["total_db"] == 28.0);

    const auto s2 = cli({"reach", "--splitters", "2,32", "--passive-loss-db", "2.82"});
    CHECK(s2.report()["results"]["max_reach_km"].get<double>() == doctest::Approx(4.8).epsilon(1e-9));
    const auto s4 = cli({"reach", "--splitters", "1:2,1:16", "--connectors", "6", "--splices", "19"});
    CHECK(s4.report()["results"]["max_reach_km"].get<double>() == doctest::Approx(14.0).epsilon(1e-9));
    CHECK(s4.report()["results"]["bandwidth_per_tenant_mbps"] == 75.0);

    const auto bad = cli({"reach", "--splitters", "4,32,2"});
    CHECK(bad.code == 2);
    CHECK(bad.report()["results"]["feasible"] == false);
    CHECK(bad.report()["results"]["fixed_loss_db"] == 30.7);

    CHECK(cli({"reach", "--splitters", "3"}).code == 1);
    CHECK(cli({"reach", "--splitters", "abc"}).code == 1);
    CHECK(cli({"reach"}).code == 1);
    CHECK(cli({"reach", "--splitters", "64", "--connectors", "1", "--passive-loss-db", "1"}).code == 1);
}

TEST_CASE("dimension") {
    const auto d = cli({"dimension", "--tenants", "1000", "--split", "32", "--olt", "2,16,8"});
    REQUIRE(d.code == 0);
    const auto dr = d.report();
    const auto& r = dr["results"];
    CHECK(r["splitters"] == 32);
    CHECK(r["pon_ports"] == 32);
    CHECK(r["olt"]["total_ports"] == 256);
    CHECK(r["olt"]["utilization_percent"] == 12.5);
    CHECK(cli({"dimension", "--tenants", "20", "--split", "32"}).report()["results"]["cable"]["cables"] ==
          json::array({24}));
    CHECK(cli({"dimension", "--olt", "3,16,4"}).report()["results"]["olt"]["total_ports"] == 192);
    CHECK(cli({"dimension"}).code == 1);
    CHECK(cli({"dimension", "--tenants", "10", "--split", "5"}).code == 1);
    CHECK(cli({"dimension", "--olt", "2;16;8"}).code == 1);
    CHECK(cli({"dimension", "--olt", "5,16,8"}).code == 1);
}

TEST_CASE("georef") {
    const auto id = cli({"georef", "--points", fixture("georef/identity4.json")});
    REQUIRE(id.code == 0);
    const auto ir = id.report();
    const auto& r = ir["results"];
    CHECK(r["transform"]["a"].get<double>() == doctest::Approx(1.0));
    CHECK(r["rms_residual"].get<double>() < 1e-12);
    CHECK(r["warnings"].empty());

    const auto three = cli({"georef", "--points", fixture("georef/three.json")});
    CHECK(three.code == 0);
    CHECK(three.report()["results"]["warnings"].size() == 1);

    CHECK(cli({"georef", "--points", fixture("georef/collinear.json")}).code == 1);
    CHECK(cli({"georef", "--points", temp_file("odn-cli-points.json", R"({"points": [{"source": [0]}]})")}).code == 1);
}

TEST_CASE("bom") {
    const auto b = cli({"bom", fixture("minimal")});
    REQUIRE(b.code == 0);
    const auto items = b.report()["results"]["items"];
    auto qty = [&](const std::string& name) {
        for (const auto& i : items)
            if (i["item"] == name) return i["quantity"].get<double>();
        return -1.0;
    };
    CHECK(qty("splitter 1:32") == 1);
    CHECK(qty("equipment ont") == 32);
    CHECK(qty("cable drop 2F") == 3.2);

    const auto csv = cli({"bom", fixture("minimal"), "--format", "csv"});
    CHECK(csv.out.rfind("item,unit,quantity\n", 0) == 0);

    const auto empty = cli({"bom", temp_file("odn-cli-empty.json", R"({"layers": {}})")});
    CHECK(empty.code == 0);
    for (const auto& i : empty.report()["results"]["items"]) CHECK(i["quantity"] == 0);

    const auto bad = cli({"bom", fixture("cycle.json")});
    CHECK(bad.code == 2);
    CHECK(has_violation(bad.report(), "CycleDetected"));
    CHECK(bad.report()["results"].is_null());
}

TEST_CASE("template") {
    const auto t = cli({"template", "villas-outdoor-fdh"});
    REQUIRE(t.code == 0);
    CHECK(t.report()["results"]["onts"] == 32);

    const auto dir = std::filesystem::temp_directory_path() / "odn-cli-template";
    std::filesystem::remove_all(dir);
    REQUIRE(cli({"template", "high-rise-indoor-fdh", "--split", "4,16", "--out", dir.string()}).code == 0);
    const auto v = cli({"validate", dir.string()});
    CHECK(v.code == 0);
    CHECK(v.report()["violations"].empty());
    std::filesystem::remove_all(dir);

    CHECK(cli({"template", "castle"}).code == 1);
    CHECK(cli({"template", "villas-outdoor-fdh", "--tenants", "100"}).code == 1);
}

TEST_CASE("usage") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    const auto help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
    CHECK(cli({"--version"}).code == 0);
}

}
