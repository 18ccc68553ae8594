#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cp1/error.hpp"
#include "cp1/hyp_core.hpp"
#include "cp1/render.hpp"
#include "support.hpp"

using namespace cp1;
using cp1::test::random_isometry;
using cp1::test::random_point;

TEST(Mobius, NormalizesDeterminant) {
  MobiusMap m = MobiusMap::from_entries(2.0, 1.0, 1.0, 3.0);
  EXPECT_NEAR(m.det(), 1.0, 1e-12);
  EXPECT_THROW(MobiusMap::from_entries(1.0, 2.0, 2.0, 4.0), Error);
}

TEST(Mobius, InverseRoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    MobiusMap m = random_isometry(rng);
    Complex z = random_point(rng);
    EXPECT_LT(std::abs(m.apply(m.inverse().apply(z)) - z), 1e-9);
    EXPECT_NEAR((m * m.inverse()).det(), 1.0, 1e-12);
  }
}

TEST(Classify, Examples) {
  auto h = classify(MobiusMap::from_entries(2.0, 0.0, 0.0, 0.5));
  EXPECT_EQ(h.kind, MobiusKind::Hyperbolic);
  EXPECT_NEAR(h.translation_length, 2.0 * std::log(2.0), 1e-12);
  EXPECT_EQ(classify(MobiusMap::translation(1.0)).kind, MobiusKind::Parabolic);
  EXPECT_EQ(classify(MobiusMap::rotation_about_i(std::numbers::pi / 4)).kind, MobiusKind::Elliptic);
  EXPECT_EQ(classify(MobiusMap::identity()).kind, MobiusKind::Identity);
}

TEST(Classify, SignFlipInvariant) {
  auto m = MobiusMap::from_entries(3.0, 1.0, 2.0, 1.0);
  auto n = MobiusMap::from_entries(-3.0, -1.0, -2.0, -1.0);
  EXPECT_EQ(classify(m).kind, classify(n).kind);
  EXPECT_NEAR(classify(m).translation_length, classify(n).translation_length, 1e-12);
}

TEST(Classify, ConjugationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> e(-2.0, 2.0);
  int checked = 0;
  while (checked < 100) {
    double a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (a * d - b * c < 0.05) continue;
    MobiusMap m = MobiusMap::from_entries(a, b, c, d);
    double tr = std::abs(m.trace());
    if (std::abs(tr - 2.0) < 1e-6) continue;
    MobiusMap g = random_isometry(rng);
    MobiusMap conj = g * m * g.inverse();
    auto k1 = classify(m), k2 = classify(conj);
    EXPECT_EQ(k1.kind, k2.kind);
    EXPECT_NEAR(k1.translation_length, k2.translation_length, 1e-9);
    ++checked;
  }
}

TEST(Axis, Diagonal) {
  Axis ax = axis_of(MobiusMap::from_entries(2.0, 0.0, 0.0, 0.5));
  ASSERT_FALSE(ax.repelling.is_infinity());
  EXPECT_NEAR(ax.repelling.x(), 0.0, 1e-12);
  EXPECT_TRUE(ax.attracting.is_infinity());
}

TEST(Axis, ConjugateByTranslation) {
  MobiusMap t = MobiusMap::translation(3.0);
  Axis ax = axis_of(t * MobiusMap::from_entries(2.0, 0.0, 0.0, 0.5) * t.inverse());
  EXPECT_NEAR(ax.repelling.x(), 3.0, 1e-12);
  EXPECT_TRUE(ax.attracting.is_infinity());
}

TEST(Axis, NotHyperbolic) {
  EXPECT_THROW(axis_of(MobiusMap::translation(1.0)), Error);
}

TEST(Axis, FixedPointsSolveQuadratic) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  int checked = 0;
  while (checked < 200) {
    double a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (a * d - b * c < 0.05 || std::abs(c) < 0.05) continue;
    MobiusMap m = MobiusMap::from_entries(a, b, c, d);
    if (std::abs(m.trace()) < 2.01) continue;
    Axis ax = axis_of(m);
    // roots of c z^2 + (d - a) z - b
    double A = m.c(), B = m.d() - m.a(), C = -m.b();
    double disc = std::sqrt(B * B - 4 * A * C);
    double r1 = (-B + disc) / (2 * A), r2 = (-B - disc) / (2 * A);
    double x1 = ax.repelling.x(), x2 = ax.attracting.x();
    EXPECT_NEAR(std::min(x1, x2), std::min(r1, r2), 1e-9 * (1 + std::abs(r1) + std::abs(r2)));
    EXPECT_NEAR(std::max(x1, x2), std::max(r1, r2), 1e-9 * (1 + std::abs(r1) + std::abs(r2)));
    // attracting end is the limit of iterates
    Complex z(0.3, 0.7);
    for (int k = 0; k < 200; ++k) z = m.apply(z);
    EXPECT_NEAR(z.real(), x2, 1e-6 * (1 + std::abs(x2)));
    ++checked;
  }
}

TEST(Dist, Examples) {
  EXPECT_NEAR(dist(Complex(0, 1), Complex(0, 2)), std::log(2.0), 1e-14);
  EXPECT_EQ(dist(Complex(0.5, 0.5), Complex(0.5, 0.5)), 0.0);
  EXPECT_THROW(dist(HPoint::real(0.0), HPoint::interior(0, 1)), Error);
}

TEST(Dist, GeodesicLengthByIntegration) {
  Complex p(0, 1), q(1, 1);
  GeodesicSeg g(HPoint::interior(p), HPoint::interior(q));
  double integrated = cp1::test::sampled_length(cp1::test::sample_curve(g, 4000));
  EXPECT_NEAR(dist(p, q), integrated, 1e-7);
}

TEST(Dist, TriangleInequality) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    Complex a = random_point(rng), b = random_point(rng), c = random_point(rng);
    EXPECT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-9);
  }
}

TEST(Dist, IsometryInvariant) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    MobiusMap m = random_isometry(rng);
    Complex a = random_point(rng), b = random_point(rng);
    EXPECT_NEAR(dist(m.apply(a), m.apply(b)), dist(a, b), 1e-9);
  }
}

TEST(SegIntersect, VerticalAgainstCircle) {
  GeodesicSeg v(HPoint::interior(0, 1), HPoint::interior(0, 4));
  GeodesicSeg c(HPoint::real(-2.0), HPoint::real(2.0));
  auto pts = seg_intersect(v, c);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LT(std::abs(pts[0] - Complex(0, 2)), 1e-12);
}

TEST(SegIntersect, DisjointVerticals) {
  GeodesicSeg a(HPoint::interior(0, 1), HPoint::interior(0, 2));
  GeodesicSeg b(HPoint::interior(1, 1), HPoint::interior(1, 2));
  EXPECT_TRUE(seg_intersect(a, b).empty());
}

TEST(SegIntersect, HypercycleAgainstCircleMatchesPolyline) {
  AxisFrame f(HPoint::real(0.0), HPoint::infinity());
  HypercycleSeg h(f, 0.1, -3.0, 3.0);
  GeodesicSeg c(HPoint::real(-1.0), HPoint::real(1.0));
  auto pts = seg_intersect(h, c);
  ASSERT_EQ(pts.size(), 1u);
  // polyline oracle: bisect along the hypercycle for |z| = 1
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (std::abs(h.point_at(mid)) < 1.0 ? lo : hi) = mid;
  }
  EXPECT_LT(std::abs(pts[0] - h.point_at(lo)), 1e-7);
}

TEST(SegIntersect, NearTouchIsTangency) {
  GeodesicSeg a(HPoint::interior(0, 1), HPoint::interior(0, 2));
  GeodesicSeg b(HPoint::interior(1e-7, 1.5), HPoint::interior(1, 1.5));
  EXPECT_THROW(seg_intersect(a, b), Error);
}

TEST(SegIntersect, RandomGeodesicsMatchExactAlgebra) {
  std::mt19937_64 rng(6);
  int crossings = 0;
  for (int i = 0; i < 500; ++i) {
    Complex p1 = random_point(rng), q1 = random_point(rng), p2 = random_point(rng), q2 = random_point(rng);
    GeodesicSeg a(HPoint::interior(p1), HPoint::interior(q1)), b(HPoint::interior(p2), HPoint::interior(q2));
    auto want = cp1::test::exact_geodesic_crossings(p1, q1, p2, q2);
    std::vector<Complex> got;
    try {
      got = seg_intersect(a, b);
    } catch (const Error&) {
      continue;
    }
    ASSERT_EQ(got.size(), want.size()) << i;
    if (!want.empty()) {
      EXPECT_LT(std::abs(got[0] - want[0]), 1e-8);
      ++crossings;
    }
  }
  EXPECT_GT(crossings, 20);
}

TEST(Hypercycle, ConstantDistanceFromAxis) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    MobiusMap m = random_isometry(rng);
    AxisFrame f = AxisFrame(HPoint::real(0.0), HPoint::infinity()).transformed(m);
    double d = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    HypercycleSeg h = equidistant_offset(f.geodesic(), d, -1.0, 1.5);
    for (int k = 0; k <= 20; ++k) {
      Complex z = h.point_at(k / 20.0);
      // distance to the axis: distance to the foot point
      Complex foot = f.from_fermi(f.param(z), 0.0);
      EXPECT_NEAR(dist(z, foot), std::abs(d), 1e-7);
    }
  }
}

TEST(Hypercycle, ZeroOffsetIsAxis) {
  AxisFrame f(HPoint::real(-1.0), HPoint::real(2.0));
  HypercycleSeg h = equidistant_offset(f.geodesic(), 0.0, -1.0, 1.0);
  for (int k = 0; k <= 10; ++k) {
    Complex z = h.point_at(k / 10.0);
    EXPECT_NEAR(std::abs(z - 0.5), 1.5, 1e-12);
  }
}

TEST(Hypercycle, OppositeOffsetsSeparatedByTwiceDistance) {
  AxisFrame f(HPoint::real(0.0), HPoint::infinity());
  HypercycleSeg a = equidistant_offset(f.geodesic(), 0.3, -1.0, 1.0);
  HypercycleSeg b = equidistant_offset(f.geodesic(), -0.3, -1.0, 1.0);
  EXPECT_TRUE(seg_intersect(a, b).empty());
  EXPECT_NEAR(dist(a.point_at(0.5), b.point_at(0.5)), 0.6, 1e-12);
}

TEST(Fermi, RoundTrip) {
  std::mt19937_64 rng(8);
  AxisFrame f(HPoint::real(-0.4), HPoint::real(1.7));
  for (int i = 0; i < 200; ++i) {
    Complex z = random_point(rng);
    auto [s, u] = f.to_fermi(z);
    EXPECT_LT(std::abs(f.from_fermi(s, u) - z), 1e-9 * (1 + std::abs(z)));
  }
}

TEST(Cayley, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    Complex z = random_point(rng);
    Complex w = halfplane_to_disk(z);
    EXPECT_LT(std::abs(w), 1.0);
    EXPECT_LT(std::abs(disk_to_halfplane(w) - z), 1e-9);
  }
}
