#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "cp1/arc_model.hpp"
#include "cp1/error.hpp"
#include "cp1/oracle.hpp"
#include "cp1/random_scene.hpp"
#include "cp1/scene.hpp"
#include "support.hpp"

using namespace cp1;
using cp1::test::data_path;

namespace {

LoadedScene load(const std::string& name) { return load_scene(read_scene_file(data_path(name))); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

// Dense polyline samples of consecutive pieces cross anywhere but at shared ends.
bool sampled_self_crossing(const std::vector<Complex>& verts) {
  std::vector<std::vector<Complex>> samples;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i)
    samples.push_back(cp1::test::sample_curve(GeodesicSeg(HPoint::interior(verts[i]), HPoint::interior(verts[i + 1])), 400));
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = a + 1; b < samples.size(); ++b)
      for (std::size_t i = 0; i + 1 < samples[a].size(); ++i)
        for (std::size_t j = 0; j + 1 < samples[b].size(); ++j) {
          if (b == a + 1 && i + 2 == samples[a].size() && j == 0) continue;
          if (cp1::test::segment_cross(samples[a][i], samples[a][i + 1], samples[b][j], samples[b][j + 1])) return true;
        }
  return false;
}

}  // namespace

TEST(Validate, SingleGeodesicPiece) {
  GraftedStructure s = uniformizing_structure(canonical_rep_ptr(2));
  DevelopedArc arc = develop_polyline(s, {Complex(0, 1), Complex(0.3, 1.2)});
  EXPECT_NO_THROW(validate_bubbleable(s, arc));
}

TEST(Validate, InterleavedDetours) {
  LoadedScene ls = load("interleaved.scene");
  EXPECT_EQ(kind_of([&] { validate_bubbleable(ls.structure, ls.arc, ls.config); }), ErrorKind::InterleavedDetours);
}

TEST(Validate, DegenerateEndpoints) {
  GraftedStructure s = uniformizing_structure(canonical_rep_ptr(2));
  EXPECT_EQ(kind_of([&] { validate_bubbleable(s, develop_polyline(s, {Complex(0, 1), Complex(0.3, 1.2), Complex(0, 1)})); }),
            ErrorKind::DegenerateEndpoint);
}

TEST(Validate, MatchesDenseSamplingOracle) {
  GraftedStructure s = uniformizing_structure(canonical_rep_ptr(2));
  SceneRng rng(21);
  int crossing = 0, simple = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> pts;
    for (int k = 0; k < 5; ++k) pts.push_back(random_point(rng, 0.5));
    bool oracle = sampled_self_crossing(pts);
    DevelopedArc arc = develop_polyline(s, pts);
    ErrorKind verdict = ErrorKind::InvalidArgument;
    bool ok = true;
    try {
      validate_bubbleable(s, arc);
    } catch (const Error& e) {
      ok = false;
      verdict = e.kind();
    }
    if (!ok && verdict != ErrorKind::SelfIntersection) continue;
    EXPECT_EQ(!ok, oracle) << trial;
    (oracle ? crossing : simple)++;
  }
  EXPECT_GT(crossing, 10);
  EXPECT_GT(simple, 10);
}

TEST(Crossings, SingleCrossing) {
  LoadedScene ls = load("degrafting.scene");
  CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
  ASSERT_EQ(t.tables.size(), 1u);
  const auto& tab = t.tables[0];
  EXPECT_EQ(tab.count(), 1);
  EXPECT_EQ(tab.sigma, std::vector<int>{1});
  EXPECT_EQ(tab.beta(1).coherence, 1);
}

TEST(Crossings, WeightTwoChain) {
  Scene sc = read_scene_file(data_path("degrafting.scene"));
  sc.curves[0].weight = 2;
  LoadedScene ls = load_scene(sc);
  CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
  const AnnulusTable* h1 = t.find(0, 1);
  const AnnulusTable* h2 = t.find(0, 2);
  ASSERT_TRUE(h1 && h2);
  EXPECT_EQ(h1->count(), 1);
  EXPECT_EQ(h2->count(), 1);
  // exit of the first annulus is the entry of the second
  const auto& a = h1->beta(1);
  const auto& b = h2->beta(1);
  EXPECT_LT(std::abs(a.frame.from_fermi(a.out.s, 0.0) - b.frame.from_fermi(b.in.s, 0.0)), 1e-9);
}

TEST(Crossings, OppositeDirectionsAreIncoherent) {
  Scene sc = read_scene_file(data_path("degrafting.scene"));
  sc.points.push_back({-1.9, 0.8});
  LoadedScene ls = load_scene(sc);
  validate_bubbleable(ls.structure, ls.arc, ls.config);
  CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
  ASSERT_EQ(t.tables.size(), 1u);
  const auto& tab = t.tables[0];
  ASSERT_EQ(tab.count(), 2);
  // orientation oracle: side of the polyline vertex before each crossing
  const auto& p = sc.points;
  int side1 = tab.beta(1).frame.offset(p[0]) > 0 ? 1 : -1;
  int side2 = tab.beta(2).frame.offset(p[1]) > 0 ? 1 : -1;
  EXPECT_EQ(tab.beta(2).coherence, side1 * side2);
  EXPECT_EQ(tab.beta(2).coherence, -1);
  EXPECT_EQ(tab.coherence_matrix[0][1], -1);
}

TEST(Crossings, RandomTableInvariants) {
  SceneRng rng(22);
  int same_dir_pairs = 0;
  for (int i = 0; i < 40; ++i) {
    LoadedScene ls = random_scene(rng);
    CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
    std::map<int, int> counts;
    std::map<int, std::vector<int>> sigmas;
    for (const auto& tab : t.tables) {
      int n = tab.count();
      ASSERT_EQ(tab.sigma.front(), 1);
      auto sorted = tab.sigma;
      std::sort(sorted.begin(), sorted.end());
      for (int k = 0; k < n; ++k) EXPECT_EQ(sorted[static_cast<std::size_t>(k)], k + 1);
      for (int k = 0; k < n; ++k) {
        EXPECT_EQ(tab.coherence_matrix[k][k], 1);
        for (int l = 0; l < n; ++l) {
          EXPECT_EQ(tab.coherence_matrix[k][l], tab.records[k].coherence * tab.records[l].coherence);
          if (k < l && tab.coherence_matrix[k][l] == 1) ++same_dir_pairs;
        }
      }
      if (auto [it, fresh] = counts.emplace(tab.region, n); !fresh) EXPECT_EQ(it->second, n);
      if (auto [it, fresh] = sigmas.emplace(tab.region, tab.sigma); !fresh) EXPECT_EQ(it->second, tab.sigma);
    }
  }
  EXPECT_GT(same_dir_pairs, 0);
}

TEST(Crossings, EquivariantUnderDeckTranslation) {
  LoadedScene ls = load("two_region.scene");
  CrossingTable t0 = extract_crossings(ls.structure, ls.arc, ls.config);
  MobiusMap g = evaluate(ls.structure.rep(), GroupWord::parse("b1", 2));
  std::vector<Complex> moved;
  for (Complex z : ls.scene.points) moved.push_back(g.apply(z));
  DevelopedArc arc = develop_polyline(ls.structure, moved, {}, ls.config);
  CrossingTable t1 = extract_crossings(ls.structure, arc, ls.config);
  ASSERT_EQ(t0.tables.size(), t1.tables.size());
  for (std::size_t i = 0; i < t0.tables.size(); ++i) {
    EXPECT_EQ(t0.tables[i].region, t1.tables[i].region);
    EXPECT_EQ(t0.tables[i].annulus, t1.tables[i].annulus);
    EXPECT_EQ(t0.tables[i].sigma, t1.tables[i].sigma);
    EXPECT_EQ(t0.tables[i].coherence_matrix, t1.tables[i].coherence_matrix);
  }
}

TEST(Reverse, Involution) {
  LoadedScene ls = load("two_region.scene");
  DevelopedArc rr = reverse(reverse(ls.arc));
  ASSERT_EQ(rr.pieces.size(), ls.arc.pieces.size());
  EXPECT_LT(std::abs(rr.start() - ls.arc.start()), 1e-12);
  EXPECT_LT(std::abs(rr.end() - ls.arc.end()), 1e-12);
  for (std::size_t i = 0; i < rr.pieces.size(); ++i) {
    EXPECT_EQ(is_detour(rr.pieces[i]), is_detour(ls.arc.pieces[i]));
    if (!is_detour(rr.pieces[i])) EXPECT_LT(std::abs(piece_start(rr.pieces[i]) - piece_start(ls.arc.pieces[i])), 1e-12);
  }
}

TEST(Reverse, SwapsEntryAndExit) {
  LoadedScene ls = load("degrafting.scene");
  CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
  CrossingTable r = extract_crossings(ls.structure, reverse(ls.arc), ls.config);
  const auto& a = t.tables[0].beta(1);
  const auto& b = r.tables[0].beta(1);
  Complex ai = a.frame.from_fermi(a.in.s, 0.0), ao = a.frame.from_fermi(a.out.s, 0.0);
  Complex bi = b.frame.from_fermi(b.in.s, 0.0), bo = b.frame.from_fermi(b.out.s, 0.0);
  EXPECT_LT(std::abs(ai - bo), 1e-9);
  EXPECT_LT(std::abs(ao - bi), 1e-9);
}

TEST(Reverse, CoherenceMatrixUnchanged) {
  Scene sc = read_scene_file(data_path("degrafting.scene"));
  sc.points.push_back({-1.9, 0.8});
  LoadedScene ls = load_scene(sc);
  CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
  CrossingTable r = extract_crossings(ls.structure, reverse(ls.arc), ls.config);
  ASSERT_EQ(t.tables.size(), r.tables.size());
  for (std::size_t i = 0; i < t.tables.size(); ++i) EXPECT_EQ(t.tables[i].coherence_matrix, r.tables[i].coherence_matrix);
}

TEST(Z2, Action) {
  using O = CrossingObject;
  EXPECT_EQ(z2_act(-1, {O::In, 3}), (CrossingDatum{O::Out, 3}));
  EXPECT_EQ(z2_act(-1, {O::AnchorIn, 2}), (CrossingDatum{O::AnchorOut, 2}));
  EXPECT_EQ(z2_act(-1, {O::Zeta, 1}), (CrossingDatum{O::Xi, 1}));
  for (auto o : {O::In, O::Out, O::AnchorIn, O::AnchorOut, O::Zeta, O::Xi}) {
    CrossingDatum x{o, 4};
    EXPECT_EQ(z2_act(1, x), x);
    EXPECT_EQ(z2_act(-1, z2_act(-1, x)), x);
    EXPECT_NE(z2_act(-1, x), x);
  }
}
