#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "cp1/error.hpp"
#include "cp1/structure_model.hpp"
#include "cp1/surgery.hpp"

using namespace cp1;

namespace {

GraftedStructure make(std::vector<std::pair<std::string, int>> curves, int genus = 2) {
  WeightedMulticurve mc;
  for (auto& [w, m] : curves) mc.components.push_back({GroupWord::parse(w, genus), m});
  return build_structure(canonical_rep_ptr(genus), mc);
}

// Closest approach of two complete geodesics, by dense sampling of one of them.
double sampled_axis_distance(const LiftedAxis& a, const LiftedAxis& b) {
  double best = std::numeric_limits<double>::infinity();
  for (double s = -12.0; s <= 12.0; s += 0.002) {
    Complex z = a.frame.from_fermi(s, 0.0);
    best = std::min(best, std::abs(b.frame.offset(z)));
  }
  return best;
}

}  // namespace

TEST(Structure, EmptyMulticurveIsUniformizing) {
  GraftedStructure s = make({});
  EXPECT_TRUE(s.is_uniformizing());
  auto d = decomposition_summary(s);
  EXPECT_EQ(d.positive_components, 1);
  EXPECT_EQ(d.real_curves, 0);
}

TEST(Structure, SingleCurve) {
  GraftedStructure s = make({{"a1", 1}});
  ASSERT_EQ(s.region_count(), 1);
  EXPECT_EQ(classify(s.region(0).holonomy).kind, MobiusKind::Hyperbolic);
  auto d = decomposition_summary(s);
  EXPECT_EQ(d.real_curves, 2);
  EXPECT_EQ(d.negative_components, 1);
}

TEST(Structure, WeightTwo) {
  auto d = decomposition_summary(make({{"a1", 2}}));
  EXPECT_EQ(d.real_curves, 4);
  EXPECT_EQ(d.negative_components, 2);
  ASSERT_EQ(d.regions.size(), 1u);
  EXPECT_EQ(d.regions[0].negative_annuli + d.regions[0].positive_annuli, 3);
}

TEST(Structure, CrossingCurvesRejected) {
  try {
    make({{"a1", 1}, {"a1b1", 1}});
    FAIL() << "expected NotDisjoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDisjoint);
  }
}

TEST(Structure, NonSimpleRejected) {
  try {
    make({{"a1a1b1b1", 1}});
    FAIL() << "expected NotSimple";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NotSimple || e.kind() == ErrorKind::NotDisjoint) << e.what();
  }
}

TEST(Structure, RealCurvesTwiceTotalWeight) {
  for (auto curves : std::vector<std::vector<std::pair<std::string, int>>>{
           {{"a1", 3}}, {{"a1", 1}, {"a2", 2}}, {{"b1", 2}, {"a2", 1}}, {{"a1b1A1B1", 1}, {"a2", 3}}}) {
    GraftedStructure s = make(curves);
    EXPECT_EQ(decomposition_summary(s).real_curves, 2 * s.multicurve().total_weight()) << s.multicurve().to_string();
  }
}

TEST(Structure, SameStructureIgnoresConjugacyRepresentative) {
  GraftedStructure a = make({{"a1", 1}});
  GraftedStructure b = make({{"b1a1B1", 1}});
  GraftedStructure c = make({{"A1", 1}});
  EXPECT_TRUE(same_structure(a, b));
  EXPECT_TRUE(same_structure(a, c));
  EXPECT_FALSE(same_structure(a, make({{"a1", 2}})));
  EXPECT_FALSE(same_structure(a, make({{"a2", 1}})));
}

TEST(Structure, RegionChain) {
  GraftedStructure s = make({{"a1", 3}});
  auto info = region_info(s, 0);
  EXPECT_EQ(info.first_annulus, 1);
  EXPECT_EQ(info.last_annulus, 3);
  ASSERT_EQ(info.boundary_labels.size(), 3u);
  std::set<std::string> labels;
  for (const auto& [l, r] : info.boundary_labels) {
    labels.insert(l);
    labels.insert(r);
  }
  EXPECT_EQ(labels.size(), 6u);
}

TEST(Epsilon, MinimalSeparationOverEight) {
  GraftedStructure s = make({{"a1", 1}});
  auto lifts = lifts_near(s, Complex(0, 1), 4.0);
  ASSERT_GE(lifts.size(), 2u);
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lifts.size(); ++i)
    for (std::size_t j = i + 1; j < lifts.size(); ++j) delta = std::min(delta, sampled_axis_distance(lifts[i], lifts[j]));
  EXPECT_NEAR(min_translate_separation(lifts), delta, 1e-4);
  Config cfg;
  cfg.epsilon_cap = 10.0;
  EpsilonContext ctx{lifts};
  EXPECT_NEAR(choose_epsilon(s, ctx, cfg), min_translate_separation(lifts) / 8.0, 1e-12);
  EXPECT_LE(choose_epsilon(s, ctx), 0.05);
}

TEST(Epsilon, DoublingWeightHalvesBound) {
  Config cfg;
  cfg.epsilon_cap = 10.0;
  GraftedStructure s1 = make({{"a1", 1}});
  GraftedStructure s2 = make({{"a1", 2}});
  auto l1 = lifts_near(s1, Complex(0, 1), 4.0);
  auto l2 = lifts_near(s2, Complex(0, 1), 4.0);
  double e1 = choose_epsilon(s1, {l1}, cfg), e2 = choose_epsilon(s2, {l2}, cfg);
  EXPECT_NEAR(e2, e1 / 2.0, 1e-12);
}

TEST(Epsilon, TighterConstraintWins) {
  Config cfg;
  cfg.epsilon_cap = 10.0;
  GraftedStructure s = make({{"a1", 1}, {"a2", 1}});
  auto all = lifts_near(s, Complex(0, 1), 4.0);
  std::vector<LiftedAxis> r0, r1;
  for (const auto& l : all) (l.region == 0 ? r0 : r1).push_back(l);
  double e = choose_epsilon(s, {all}, cfg);
  EXPECT_LE(e, choose_epsilon(s, {r0}, cfg) + 1e-15);
  EXPECT_LE(e, choose_epsilon(s, {r1}, cfg) + 1e-15);
}

TEST(Collar, WeightOneCurves) {
  GraftedStructure s = make({{"a1", 1}});
  CollarSystem c = collar_system(s, 0, 0.05);
  EXPECT_EQ(c.indices, (std::vector<int>{-1, 0, 1}));
  ASSERT_EQ(c.bands.size(), 1u);
  EXPECT_NEAR(c.curve(0).distance(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.curve(1).distance()), 0.05, 1e-15);
}

TEST(Collar, WeightTwoBandsMeetAlongCenter) {
  GraftedStructure s = make({{"a1", 2}});
  double eps = 0.02;
  CollarSystem c = collar_system(s, 0, eps);
  EXPECT_EQ(c.indices.size(), 5u);
  ASSERT_EQ(c.bands.size(), 2u);
  // bands are bounded by curves at offsets -(j) * eps; the shared boundary is gamma_0
  EXPECT_NEAR(c.band(1).lower, c.band(2).upper, 1e-15);
  EXPECT_NEAR(std::min(std::abs(c.band(1).lower), std::abs(c.band(1).upper)), 0.0, 1e-15);
  for (const auto& b : c.bands) EXPECT_NEAR(b.center, band_center(2, b.annulus, eps), 1e-15);
}

TEST(Collar, ShrinksToAxis) {
  GraftedStructure s = make({{"a1", 1}});
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.05, 0.01, 0.001, 1e-4}) {
    CollarSystem c = collar_system(s, 0, eps);
    const auto& g = c.curve(1);
    double h = 0.0;
    for (int k = 0; k <= 20; ++k) {
      Complex z = g.point_at(k / 20.0);
      h = std::max(h, dist(z, c.base_frame.from_fermi(c.base_frame.param(z), 0.0)));
    }
    EXPECT_LT(h, prev);
    prev = h;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Collar, CurvesAreDisjoint) {
  GraftedStructure s = make({{"a1", 2}});
  CollarSystem c = collar_system(s, 0, 0.02);
  for (std::size_t i = 0; i < c.curves.size(); ++i)
    for (std::size_t j = i + 1; j < c.curves.size(); ++j) EXPECT_TRUE(seg_intersect(c.curves[i], c.curves[j]).empty());
}

TEST(Graft, AddsTwoRealCurvesPerUnitWeight) {
  GraftedStructure s0 = make({});
  GraftedStructure s1 = graft(s0, GroupWord::parse("a1", 2), 1);
  EXPECT_EQ(s1.multicurve().to_string(), make({{"a1", 1}}).multicurve().to_string());
  GraftedStructure twice = graft(s1, GroupWord::parse("a1", 2), 1);
  EXPECT_TRUE(same_structure(twice, graft(s0, GroupWord::parse("a1", 2), 2)));
  EXPECT_EQ(decomposition_summary(twice).real_curves, 4);
  EXPECT_THROW(graft(s1, GroupWord::parse("a1b1", 2), 1), Error);
}
