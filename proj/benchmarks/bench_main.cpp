#include "odn/dimensioning.hpp"
#include "odn/plan.hpp"
#include "odn/planner.hpp"
#include "odn/power_budget.hpp"
#include "odn/topology.hpp"

#include <benchmark/benchmark.h>

using namespace odn;

namespace {

geo::PlanDocument villas(int tenants, std::vector<int> split) {
    auto p = planner::scenario_defaults(planner::ScenarioKind::VillasOutdoorFdh);
    p.tenants = tenants;
    p.split_ratios = std::move(split);
    return planner::scenario_template(planner::ScenarioKind::VillasOutdoorFdh, p);
}

std::vector<int> split_for(int tenants) {
    if (tenants <= 32) return {tenants};
    return {2, tenants / 2};
}

}  // namespace

static void BM_PathLoss(benchmark::State& state) {
    const auto plan = villas(32, {32});
    const auto path = path_to_ont(plan.trees.front(), ont_paths(plan.trees.front()).front().ont_id);
    const auto model = budget::theoretical_model();
    for (auto _ : state) benchmark::DoNotOptimize(budget::path_loss(path, model));
}
BENCHMARK(BM_PathLoss);

static void BM_WorstCase(benchmark::State& state) {
    const auto tenants = static_cast<int>(state.range(0));
    const auto plan = villas(tenants, split_for(tenants));
    const auto model = budget::practical_model();
    for (auto _ : state) benchmark::DoNotOptimize(budget::worst_case_ont(plan.trees.front(), model));
    state.SetComplexityN(tenants);
}
BENCHMARK(BM_WorstCase)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_ValidateTopology(benchmark::State& state) {
    const auto tenants = static_cast<int>(state.range(0));
    const auto plan = villas(tenants, split_for(tenants));
    for (auto _ : state) benchmark::DoNotOptimize(validate_topology(plan.trees.front()));
    state.SetComplexityN(tenants);
}
BENCHMARK(BM_ValidateTopology)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_MaxReach(benchmark::State& state) {
    const std::vector<SplitRatio> split = {SplitRatio::R2, SplitRatio::R32};
    const auto model = budget::theoretical_model();
    for (auto _ : state) benchmark::DoNotOptimize(budget::max_reach_km(split, 4, 12, model));
}
BENCHMARK(BM_MaxReach);

static void BM_ScenarioTemplate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(villas(32, {32}));
}
BENCHMARK(BM_ScenarioTemplate);

static void BM_Bom(benchmark::State& state) {
    const auto plan = villas(64, {2, 32});
    for (auto _ : state) benchmark::DoNotOptimize(dimensioning::bom(plan));
}
BENCHMARK(BM_Bom);

static void BM_EmitReload(benchmark::State& state) {
    const auto plan = villas(64, {2, 32});
    for (auto _ : state) {
        auto doc = geo::plan_from_json(geo::emit_plan_inline(plan));
        benchmark::DoNotOptimize(doc);
    }
}
BENCHMARK(BM_EmitReload);
BENCHMARK_MAIN();
