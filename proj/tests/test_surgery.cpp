#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <set>

#include "cp1/error.hpp"
#include "cp1/random_scene.hpp"
#include "cp1/scene.hpp"
#include "cp1/surgery.hpp"
#include "support.hpp"

using namespace cp1;
using cp1::test::data_path;

namespace {

LoadedScene load(const std::string& name) { return load_scene(read_scene_file(data_path(name))); }

LoadedScene with_weight(int w) {
  Scene sc = read_scene_file(data_path("degrafting.scene"));
  sc.curves[0].weight = w;
  return load_scene(sc);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

void expect_clean(const ReroutePlan& p, const DevelopedArc& arc) {
  EXPECT_TRUE(p.verified);
  EXPECT_TRUE(p.verdict.embedded) << p.verdict.to_string();
  EXPECT_GT(p.min_imaginary, 0.0);
  EXPECT_LE(p.endpoint_residual, 1e-9);
  EXPECT_LT(dist(p.rerouted.start(), arc.start()), 1e-9);
  // the end lies over the original end point, in the chart of the last sheet
  EXPECT_LT(dist(p.rerouted.end(), p.end_map.apply(arc.end())), 1e-6);
  // independent re-check of the developed output
  std::vector<Curve> curves;
  for (const auto& piece : p.rerouted.pieces) {
    ASSERT_FALSE(is_detour(piece));
    if (const auto* g = std::get_if<GeodesicSeg>(&piece)) curves.push_back(*g);
    else curves.push_back(std::get<HypercycleSeg>(piece));
  }
  EXPECT_GT(halfplane_check(curves), 0.0);
}

GraftedStructure structure(std::vector<std::pair<std::string, int>> curves) {
  WeightedMulticurve mc;
  for (auto& [w, m] : curves) mc.components.push_back({GroupWord::parse(w, 2), m});
  return build_structure(canonical_rep_ptr(2), mc);
}

}  // namespace

TEST(Reroute, DegraftingWeightOne) {
  LoadedScene ls = load("degrafting.scene");
  auto t0 = std::chrono::steady_clock::now();
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_TRUE(p.result.multicurve().empty());
  expect_clean(p, ls.arc);
  EXPECT_LT(secs, 1.0);
}

class RerouteWeight : public ::testing::TestWithParam<int> {};

TEST_P(RerouteWeight, SingleCrossingRemovesComponent) {
  LoadedScene ls = with_weight(GetParam());
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  EXPECT_TRUE(p.result.multicurve().empty()) << p.result.multicurve().to_string();
  expect_clean(p, ls.arc);
}

INSTANTIATE_TEST_SUITE_P(Weights, RerouteWeight, ::testing::Values(1, 2, 3));

TEST(Reroute, TwoRegions) {
  LoadedScene ls = load("two_region.scene");
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  EXPECT_TRUE(p.result.multicurve().empty());
  expect_clean(p, ls.arc);
}

TEST(Reroute, ZeroCrossingIsPassthrough) {
  LoadedScene ls = load("zero_crossing.scene");
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  for (const auto& st : p.steps) EXPECT_EQ(st.kind, StepKind::FollowBeta);
  EXPECT_TRUE(same_structure(p.result, ls.structure));
  EXPECT_TRUE(same_arc(p.rerouted, ls.arc));
}

TEST(Reroute, AuxiliaryStepsUsedOnce) {
  SceneRng rng(41);
  for (int i = 0; i < 30; ++i) {
    LoadedScene ls = random_scene(rng);
    ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
    expect_clean(p, ls.arc);
    std::set<std::pair<int, int>> zeta, xi;
    for (const auto& st : p.steps) {
      if (st.kind == StepKind::FollowZeta) EXPECT_TRUE(zeta.insert({st.unit, 0}).second);
      if (st.kind == StepKind::FollowXi) EXPECT_TRUE(xi.insert({st.unit, 0}).second);
    }
  }
}

TEST(Reroute, ReportFormat) {
  LoadedScene ls = load("degrafting.scene");
  std::string r = plan_report(reroute(ls.structure, ls.arc, ls.config));
  EXPECT_NE(r.find("steps "), std::string::npos);
  EXPECT_NE(r.find("result multicurve: []"), std::string::npos);
  EXPECT_NE(r.find("FollowZeta"), std::string::npos);
}

TEST(Machine, PredecessorInvertsSuccessor) {
  SceneRng rng(42);
  int tables = 0;
  for (int i = 0; i < 30; ++i) {
    LoadedScene ls = random_scene(rng);
    CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
    for (const auto& tab : t.tables) {
      for (int k = 1; k <= tab.count(); ++k)
        for (int w : {1, -1}) {
          MachineState st{k, w};
          MachineState nx = machine_successor(tab, st);
          MachineState back = machine_predecessor(tab, nx);
          EXPECT_EQ(back.k, st.k);
          EXPECT_EQ(back.omega, st.omega);
        }
      ++tables;
    }
  }
  EXPECT_GT(tables, 20);
}

TEST(DegraftFull, Examples) {
  LoadedScene ls = load("two_region.scene");
  auto [s, arc] = degraft_full(ls.structure, ls.arc, ls.config);
  EXPECT_TRUE(s.is_uniformizing());
  LoadedScene z = load("zero_crossing.scene");
  EXPECT_EQ(kind_of([&] { degraft_full(z.structure, z.arc, z.config); }), ErrorKind::NotFullCover);
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  auto [s2, arc2] = degraft_full(u, z.arc);
  EXPECT_TRUE(s2.is_uniformizing());
  EXPECT_TRUE(same_arc(arc2, z.arc));
}

TEST(Bubble, RoundTripAndErrors) {
  LoadedScene ls = load("degrafting.scene");
  BranchedStructure b = bubble(ls.structure, ls.arc, ls.config);
  EXPECT_EQ(b.branch_point_count(), 2);
  EXPECT_TRUE(b.rep() == ls.structure.rep());
  auto [s, arc] = debubble(b);
  EXPECT_TRUE(same_structure(s, ls.structure));
  EXPECT_TRUE(same_arc(arc, ls.arc, 0.0));
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  DevelopedArc fig8 = develop_polyline(u, {Complex(-1, 1), Complex(1, 2), Complex(1, 1), Complex(-1, 2)});
  EXPECT_EQ(kind_of([&] { bubble(u, fig8); }), ErrorKind::SelfIntersection);
  BranchedStructure g = bubble(u, develop_polyline(u, {Complex(0, 1), Complex(0.4, 1.3)}));
  EXPECT_EQ(g.primary().branch_start(), Complex(0, 1));
}

TEST(Bubble, DebubbleAlongPlan) {
  LoadedScene ls = load("degrafting.scene");
  BranchedStructure b = bubble(ls.structure, ls.arc, ls.config);
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  certify(b, p, ls.config);
  ASSERT_EQ(b.presentations().size(), 2u);
  auto [s, arc] = debubble(b, p, ls.config);
  EXPECT_TRUE(s.is_uniformizing());
  EXPECT_TRUE(same_arc(arc, p.rerouted, 1e-6));
  // the rerouted side re-bubbles to an equivalent presentation
  BranchedStructure b2 = bubble(s, arc, ls.config);
  EXPECT_TRUE(same_presentation(b2.primary(), b.presentations()[1], ls.config));
  EXPECT_TRUE(b2.rep() == b.rep());
  // a plan for another arc does not designate a bubble of b
  LoadedScene other = load("two_region.scene");
  ReroutePlan q = reroute(other.structure, other.arc, other.config);
  EXPECT_EQ(kind_of([&] { debubble(b, q, ls.config); }), ErrorKind::NotABubble);
}

TEST(Join, Identical) {
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  EXPECT_TRUE(plan_join(u, u).moves.empty());
  GraftedStructure s = structure({{"a1", 1}});
  EXPECT_TRUE(plan_join(s, s).moves.empty());
}

TEST(Join, OneSided) {
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  GraftedStructure s = structure({{"a1", 1}});
  for (auto [from, to] : {std::pair{s, u}, std::pair{u, s}}) {
    MoveSequence seq = plan_join(from, to);
    EXPECT_EQ(seq.bubblings(), 1);
    EXPECT_EQ(seq.debubblings(), 1);
    EXPECT_NO_THROW(replay_moves(seq));
    EXPECT_TRUE(same_structure(seq.moves.back().structure, to));
  }
}

TEST(Join, TwoSided) {
  GraftedStructure a = structure({{"a1", 1}});
  GraftedStructure b = structure({{"a2", 2}, {"b1", 1}});
  MoveSequence seq = plan_join(a, b);
  EXPECT_EQ(seq.bubblings(), 2);
  EXPECT_EQ(seq.debubblings(), 2);
  EXPECT_NO_THROW(replay_moves(seq));
  EXPECT_TRUE(same_structure(seq.moves.back().structure, b));
  for (const auto& m : seq.moves) EXPECT_TRUE(m.structure.rep() == a.rep());
  EXPECT_NE(seq.report().find("bubblings: 2, debubblings: 2"), std::string::npos);
}

TEST(Join, Branched) {
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  BranchedStructure x = bubble(u, develop_polyline(u, {Complex(0, 1), Complex(0.4, 1.3)}));
  BranchedStructure y = bubble(u, develop_polyline(u, {Complex(0.1, 0.9), Complex(-0.3, 1.2)}));
  EXPECT_TRUE(plan_join_branched(x, x).moves.empty());
  MoveSequence shared = plan_join_branched(x, y);
  EXPECT_EQ(shared.bubblings(), 1);
  EXPECT_EQ(shared.debubblings(), 1);
  EXPECT_NO_THROW(replay_moves(shared, x));

  LoadedScene ls = load("degrafting.scene");
  GraftedStructure a2 = structure({{"a2", 1}});
  BranchedStructure p = bubble(ls.structure, ls.arc);
  BranchedStructure q = bubble(a2, develop_polyline(a2, {Complex(0, 1), Complex(0.2, 1.1)}));
  MoveSequence seq = plan_join_branched(p, q);
  EXPECT_EQ(seq.bubblings(), 3);
  EXPECT_EQ(seq.debubblings(), 3);
  EXPECT_NO_THROW(replay_moves(seq, p));
}
