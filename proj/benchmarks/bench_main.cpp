#include <benchmark/benchmark.h>

#include "cp1/oracle.hpp"
#include "cp1/random_scene.hpp"
#include "cp1/scene.hpp"
#include "cp1/surgery.hpp"

namespace {

cp1::LoadedScene fixture(const char* name) {
  return cp1::load_scene(cp1::read_scene_file(std::string(CP1_BENCH_DATA) + "/" + name));
}

void BM_EnumerateBall(benchmark::State& state) {
  auto rep = cp1::canonical_rep(2);
  int radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cp1::enumerate_ball(rep, radius));
}
BENCHMARK(BM_EnumerateBall)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BuildStructure(benchmark::State& state) {
  auto rep = cp1::canonical_rep_ptr(2);
  cp1::WeightedMulticurve mc;
  mc.components.push_back({cp1::GroupWord::parse("a1", 2), 1});
  mc.components.push_back({cp1::GroupWord::parse("a2", 2), 2});
  for (auto _ : state) benchmark::DoNotOptimize(cp1::build_structure(rep, mc));
}
BENCHMARK(BM_BuildStructure)->Unit(benchmark::kMillisecond);

void BM_ExtractCrossings(benchmark::State& state) {
  auto ls = fixture("two_region.scene");
  for (auto _ : state) benchmark::DoNotOptimize(cp1::extract_crossings(ls.structure, ls.arc, ls.config));
}
BENCHMARK(BM_ExtractCrossings)->Unit(benchmark::kMillisecond);

void BM_RerouteDegrafting(benchmark::State& state) {
  auto ls = fixture("degrafting.scene");
  ls.config.verify = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(cp1::reroute(ls.structure, ls.arc, ls.config));
}
BENCHMARK(BM_RerouteDegrafting)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RerouteTwoRegion(benchmark::State& state) {
  auto ls = fixture("two_region.scene");
  for (auto _ : state) benchmark::DoNotOptimize(cp1::reroute(ls.structure, ls.arc, ls.config));
}
BENCHMARK(BM_RerouteTwoRegion)->Unit(benchmark::kMillisecond);

void BM_RerouteRandom(benchmark::State& state) {
  cp1::SceneRng rng(7);
  std::vector<cp1::LoadedScene> scenes;
  for (int i = 0; i < 10; ++i) scenes.push_back(cp1::random_scene(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& ls = scenes[i++ % scenes.size()];
    benchmark::DoNotOptimize(cp1::reroute(ls.structure, ls.arc, ls.config));
  }
}
BENCHMARK(BM_RerouteRandom)->Unit(benchmark::kMillisecond);

void BM_EmbeddedCheck(benchmark::State& state) {
  auto ls = fixture("two_region.scene");
  auto plan = cp1::reroute(ls.structure, ls.arc, ls.config);
  cp1::ChartedPath path;
  for (const auto& sp : plan.charted) {
    std::size_t c = path.charts.size();
    for (std::size_t k = 0; k < path.charts.size(); ++k)
      if (path.charts[k] == sp.sheet) c = k;
    if (c == path.charts.size()) path.charts.push_back(sp.sheet);
    path.chart_of.push_back(c);
    if (const auto* g = std::get_if<cp1::GeodesicSeg>(&sp.local)) path.local.emplace_back(*g);
    else path.local.emplace_back(std::get<cp1::HypercycleSeg>(sp.local));
    path.joined.push_back(!path.local.empty() && path.local.size() > 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(cp1::embedded_check(ls.structure.rep(), path));
}
BENCHMARK(BM_EmbeddedCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
