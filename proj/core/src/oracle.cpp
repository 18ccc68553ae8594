#include "cp1/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cp1/arc_model.hpp"
#include "cp1/error.hpp"
#include "cp1/surface_group.hpp"

namespace cp1 {

namespace {

double sagitta(const Carrier& c, Complex p, Complex q) {
  if (c.is_line) return 0.0;
  double half = 0.5 * std::abs(p - q);
  return c.radius - std::sqrt(std::max(0.0, c.radius * c.radius - half * half));
}

Carrier curve_carrier(const Curve& c) {
  return std::visit([](const auto& s) { return s.carrier(); }, c);
}

void refine(const Curve& c, const Carrier& car, double t0, double t1, Complex p0, Complex p1, double tol,
            int depth, int max_depth, std::vector<Complex>& out, double& worst) {
  double tm = 0.5 * (t0 + t1);
  Complex pm = curve_point(c, tm);
  double sag = sagitta(car, p0, p1);
  double bulge = std::abs(pm - 0.5 * (p0 + p1));
  // a bulge beyond the minor-arc sagitta means the chord spans a major arc
  bool major = bulge > sag + 1e-12 * (1.0 + std::abs(p0) + std::abs(p1));
  double ymin = std::min(p0.imag(), p1.imag());
  double dev = sag / ymin;
  if (!major && dev <= tol) {
    worst = std::max(worst, dev);
    out.push_back(p1);
    return;
  }
  if (depth >= max_depth)
    fail(ErrorKind::Inconclusive, "refinement exhausted near (" + std::to_string(pm.real()) + ", " +
                                      std::to_string(pm.imag()) + ")");
  refine(c, car, t0, tm, p0, pm, tol, depth + 1, max_depth, out, worst);
  refine(c, car, tm, t1, pm, p1, tol, depth + 1, max_depth, out, worst);
}

double seg_point_distance(Complex a, Complex b, Complex p, double* t_out = nullptr) {
  Complex d = b - a;
  double len2 = std::norm(d);
  double t = len2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return std::abs(a + t * d - p);
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Euclidean distance between segments and a point realizing it.
double segment_gap(Complex a, Complex b, Complex c, Complex d, Complex& where) {
  if (segments_cross(a, b, c, d)) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    where = c + (d - c) * (d1 / (d1 - d2));
    return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  auto test = [&](Complex s0, Complex s1, Complex p) {
    double t;
    double g = seg_point_distance(s0, s1, p, &t);
    if (g < best) {
      best = g;
      where = p;
    }
  };
  test(a, b, c);
  test(a, b, d);
  test(c, d, a);
  test(c, d, b);
  return best;
}


}  // namespace

PolylineApprox approximate(const Curve& c, double max_deviation, int max_depth) {
  PolylineApprox out;
  Complex p0 = curve_start(c), p1 = curve_end(c);
  if (!(p0.imag() > 0.0) || !(p1.imag() > 0.0))
    fail(ErrorKind::BoundaryPoint, "polyline approximation needs interior endpoints");
  out.vertices.push_back(p0);
  refine(c, curve_carrier(c), 0.0, 1.0, p0, p1, max_deviation, 0, max_depth, out.vertices, out.deviation);
  return out;
}

std::string EmbeddingVerdict::to_string() const {
  std::ostringstream os;
  os.precision(12);
  if (embedded) return "embedded";
  os << (inconclusive ? "inconclusive" : "not embedded") << ": pieces " << piece_a << " and " << piece_b
     << " at (" << where.real() << ", " << where.imag() << "), gap " << gap;
  return os.str();
}

namespace {

// Sub-arc [t0, t1] of a piece with its chord and a Euclidean bound on the
// distance from the curve to the chord.
struct Span {
  std::size_t piece;
  double t0, t1;
  Complex a, b;
  double err;
  double xmin, xmax, ymin, ymax;
};

Span make_span(const Curve& c, const Carrier& car, std::size_t piece, double t0, double t1, Complex a, Complex b) {
  Span s{piece, t0, t1, a, b, 0.0, 0, 0, 0, 0};
  Complex m = curve_point(c, 0.5 * (t0 + t1));
  double sag = sagitta(car, a, b);
  double bulge = std::abs(m - 0.5 * (a + b));
  bool major = bulge > sag + 1e-12 * (1.0 + std::abs(a) + std::abs(b));
  s.err = major ? std::max(bulge, std::abs(a - b)) * 2.0 : sag;
  s.xmin = std::min(a.real(), b.real()) - s.err;
  s.xmax = std::max(a.real(), b.real()) + s.err;
  s.ymin = std::min(a.imag(), b.imag()) - s.err;
  s.ymax = std::max(a.imag(), b.imag()) + s.err;
  return s;
}

// Angle between the incoming and outgoing directions at the joint.
double joint_angle(const Curve& prev, const Curve& next) {
  Complex j = curve_start(next);
  double h = 1e-7;
  Complex d0 = curve_point(prev, 1.0 - h) - j;
  Complex d1 = curve_point(next, h) - j;
  if (std::abs(d0) == 0.0 || std::abs(d1) == 0.0) return 0.0;
  return std::abs(std::arg(d1 / d0));
}

// Curves in one common chart; id[i] is the position of curve i along the
// path, group[i] its chart.
struct SearchInput {
  std::vector<Curve> curves;
  std::vector<std::size_t> id;
  std::vector<int> group;
  bool cross_only = false;
};

class EmbeddingSearch {
 public:
  EmbeddingSearch(const SearchInput& in, const std::vector<bool>& joined, double tol)
      : in_(in), joined_(joined), tol_(tol) {
    for (const auto& c : in.curves) carriers_.push_back(curve_carrier(c));
  }

  Span whole(std::size_t i) const {
    const Curve& c = in_.curves[i];
    return make_span(c, carriers_[i], i, 0.0, 1.0, curve_start(c), curve_end(c));
  }

  std::pair<Span, Span> split(const Span& s) const {
    double tm = 0.5 * (s.t0 + s.t1);
    const Curve& c = in_.curves[s.piece];
    Complex m = curve_point(c, tm);
    return {make_span(c, carriers_[s.piece], s.piece, s.t0, tm, s.a, m),
            make_span(c, carriers_[s.piece], s.piece, tm, s.t1, m, s.b)};
  }

  bool fine(const Span& s) const {
    double y = std::min(s.a.imag(), s.b.imag());
    return s.err <= 0.25 * tol_ * y;
  }

  bool comparable(const Span& p, const Span& q) const {
    if (in_.id[p.piece] == in_.id[q.piece]) return false;
    return !in_.cross_only || in_.group[p.piece] != in_.group[q.piece];
  }

  bool adjacent(const Span& p, const Span& q) const {
    std::size_t ip = in_.id[p.piece], iq = in_.id[q.piece];
    const Span& lo = ip < iq ? p : q;
    const Span& hi = ip < iq ? q : p;
    std::size_t hid = std::max(ip, iq), lid = std::min(ip, iq);
    if (hid != lid + 1 || !joined_[hid]) return false;
    if (lo.t1 == 1.0 && hi.t0 == 0.0) return true;
    // near the shared joint two arcs meeting at angle theta stay about
    // d sin(theta) apart
    Complex j = curve_start(in_.curves[hi.piece]);
    double theta = joint_angle(in_.curves[lo.piece], in_.curves[hi.piece]);
    double reach = std::min(0.5, 8.0 * tol_ / std::max(std::sin(std::min(theta, 1.5)), 1e-4));
    return dist(j, lo.a) <= reach && dist(j, hi.b) <= reach;
  }

  void witness(const Span& p, const Span& q, Complex where, EmbeddingVerdict& v) const {
    v.embedded = false;
    v.piece_a = std::min(in_.id[p.piece], in_.id[q.piece]);
    v.piece_b = std::max(in_.id[p.piece], in_.id[q.piece]);
    v.where = where;
  }

  // false with verdict filled on the first close approach
  bool check(const Span& p, const Span& q, int depth, EmbeddingVerdict& v) const {
    double y = std::max(1e-300, std::min(p.ymin, q.ymin));
    double pad = tol_ * std::max(p.ymax, q.ymax);
    if (p.xmin > q.xmax + pad || q.xmin > p.xmax + pad || p.ymin > q.ymax + pad || q.ymin > p.ymax + pad)
      return true;
    Complex where;
    double gap = segment_gap(p.a, p.b, q.a, q.b, where);
    double ylo = std::min({p.a.imag(), p.b.imag(), q.a.imag(), q.b.imag()});
    if (gap - p.err - q.err >= tol_ * y) return true;
    bool fp = fine(p), fq = fine(q);
    if (fp && fq) {
      if (adjacent(p, q)) return true;
      if (gap < tol_ * ylo) {
        witness(p, q, where, v);
        v.gap = gap / ylo;
        return false;
      }
      return true;
    }
    if (depth > 160) {
      witness(p, q, where, v);
      v.inconclusive = true;
      return false;
    }
    bool split_p = !fp && (fq || p.err / std::max(1e-300, p.ymax) >= q.err / std::max(1e-300, q.ymax));
    if (split_p) {
      auto [p0, p1] = split(p);
      return check(p0, q, depth + 1, v) && check(p1, q, depth + 1, v);
    }
    auto [q0, q1] = split(q);
    return check(p, q0, depth + 1, v) && check(p, q1, depth + 1, v);
  }

 private:
  const SearchInput& in_;
  const std::vector<bool>& joined_;
  double tol_;
  std::vector<Carrier> carriers_;
};

bool folds_back(const Curve& prev, const Curve& next) {
  Complex j = curve_start(next);
  double h = 1e-6;
  Complex d0 = j - curve_point(prev, 1.0 - h);
  Complex d1 = curve_point(next, h) - j;
  if (std::abs(d0) == 0.0 || std::abs(d1) == 0.0) return false;
  return (d0 * std::conj(d1)).real() < 0.0 && std::abs(cross(d0, d1)) <= 1e-6 * std::abs(d0) * std::abs(d1);
}

void require_interior(const std::vector<Curve>& path) {
  for (const auto& c : path)
    if (!(curve_start(c).imag() > 0.0) || !(curve_end(c).imag() > 0.0))
      fail(ErrorKind::BoundaryPoint, "embedding check needs interior endpoints");
}

// joined[id]: piece id starts where piece id - 1 ends
bool search_pairs(const SearchInput& in, const std::vector<bool>& joined, double tol, EmbeddingVerdict& v) {
  EmbeddingSearch search(in, joined, tol);
  // coarse spans, then a sweep over padded boxes
  std::vector<Span> spans;
  for (std::size_t i = 0; i < in.curves.size(); ++i) {
    std::vector<Span> stack{search.whole(i)};
    while (!stack.empty()) {
      Span s = stack.back();
      stack.pop_back();
      double y = std::min(s.a.imag(), s.b.imag());
      if (s.err <= 0.05 * y || s.t1 - s.t0 < 1e-6) {
        spans.push_back(s);
      } else {
        auto [a, b] = search.split(s);
        stack.push_back(b);
        stack.push_back(a);
      }
    }
  }
  std::vector<std::size_t> order(spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto lo_x = [&](std::size_t k) { return spans[k].xmin - tol * spans[k].ymax; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo_x(a) < lo_x(b); });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const Span& p = spans[order[oi]];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const Span& q = spans[order[oj]];
      if (lo_x(order[oj]) > p.xmax + tol * p.ymax) break;
      if (!search.comparable(p, q)) continue;
      if (!search.check(p, q, 0, v)) return false;
    }
  }
  return true;
}

EmbeddingVerdict embedded_impl(const std::vector<Curve>& path, const std::vector<bool>& joined, const Config& cfg) {
  EmbeddingVerdict v;
  require_interior(path);
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (joined[i] && folds_back(path[i - 1], path[i])) {
      v.embedded = false;
      v.piece_a = i - 1;
      v.piece_b = i;
      v.where = curve_start(path[i]);
      return v;
    }
  }
  SearchInput in;
  in.curves = path;
  for (std::size_t i = 0; i < path.size(); ++i) {
    in.id.push_back(i);
    in.group.push_back(0);
  }
  search_pairs(in, joined, cfg.tau_sep, v);
  return v;
}

// cosh of the displacement of i, robust for large entries
double displacement(const MobiusMap& m) {
  double n = m.a() * m.a() + m.b() * m.b() + m.c() * m.c() + m.d() * m.d();
  return std::acosh(std::max(1.0, 0.5 * n / std::abs(m.det())));
}

double chart_radius(const Curve& c) {
  double r = 0.0;
  for (int k = 0; k <= 8; ++k) r = std::max(r, dist(Complex(0.0, 1.0), curve_point(c, k / 8.0)));
  return r;
}

}  // namespace

EmbeddingVerdict embedded_check(const FuchsianRep& rep, const ChartedPath& path, const Config& cfg) {
  EmbeddingVerdict v;
  const std::size_t n = path.local.size();
  require_interior(path.local);
  std::vector<bool> joined = path.joined;
  joined.resize(n, true);
  std::vector<double> radius(path.charts.size(), 0.0);
  std::vector<std::vector<std::size_t>> members(path.charts.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = path.chart_of[i];
    members[c].push_back(i);
    radius[c] = std::max(radius[c], chart_radius(path.local[i]));
  }
  auto relative = [&](std::size_t c1, std::size_t c2) {
    return evaluate(rep, path.charts[c1].inverse() * path.charts[c2]);
  };
  for (std::size_t i = 1; i < n; ++i) {
    if (!joined[i]) continue;
    std::size_t c0 = path.chart_of[i - 1], c1 = path.chart_of[i];
    Curve next = c0 == c1 ? path.local[i] : curve_transformed(path.local[i], relative(c0, c1));
    if (folds_back(path.local[i - 1], next)) {
      v.embedded = false;
      v.piece_a = i - 1;
      v.piece_b = i;
      v.where = curve_start(next);
      return v;
    }
  }
  for (std::size_t c1 = 0; c1 < members.size(); ++c1) {
    if (members[c1].empty()) continue;
    for (std::size_t c2 = c1; c2 < members.size(); ++c2) {
      if (members[c2].empty()) continue;
      MobiusMap m = c1 == c2 ? MobiusMap() : relative(c1, c2);
      if (c1 != c2 && displacement(m) > radius[c1] + radius[c2] + 1.0) continue;
      SearchInput in;
      in.cross_only = c1 != c2;
      for (std::size_t i : members[c1]) {
        in.curves.push_back(path.local[i]);
        in.id.push_back(i);
        in.group.push_back(0);
      }
      if (c1 != c2) {
        for (std::size_t i : members[c2]) {
          in.curves.push_back(curve_transformed(path.local[i], m));
          in.id.push_back(i);
          in.group.push_back(1);
        }
      }
      if (!search_pairs(in, joined, cfg.tau_sep, v)) return v;
    }
  }
  return v;
}

EmbeddingVerdict embedded_check(const std::vector<Curve>& path, const Config& cfg) {
  return embedded_impl(path, std::vector<bool>(path.size(), true), cfg);
}

namespace {

std::vector<Curve> h2_curves(const DevelopedArc& arc) {
  std::vector<Curve> out;
  for (const auto& p : arc.pieces) {
    if (const auto* g = std::get_if<GeodesicSeg>(&p)) out.emplace_back(*g);
    if (const auto* h = std::get_if<HypercycleSeg>(&p)) out.emplace_back(*h);
  }
  return out;
}

}  // namespace

EmbeddingVerdict embedded_check(const DevelopedArc& arc, const Config& cfg) {
  std::vector<Curve> curves;
  std::vector<bool> joined;
  bool after_detour = false;
  for (const auto& p : arc.pieces) {
    if (is_detour(p)) {
      after_detour = true;
      continue;
    }
    if (const auto* g = std::get_if<GeodesicSeg>(&p)) curves.emplace_back(*g);
    if (const auto* h = std::get_if<HypercycleSeg>(&p)) curves.emplace_back(*h);
    joined.push_back(!after_detour);
    after_detour = false;
  }
  return embedded_impl(curves, joined, cfg);
}

constexpr int kHalfPlaneSamples = 256;

double halfplane_check(const std::vector<Curve>& path, const Config& cfg) {
  (void)cfg;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : path) {
    for (int k = 0; k <= kHalfPlaneSamples; ++k)
      best = std::min(best, curve_point(c, static_cast<double>(k) / kHalfPlaneSamples).imag());
  }
  return best;
}

double halfplane_check(const DevelopedArc& arc, const Config& cfg) {
  if (arc.has_detours()) return kLeavesHalfPlane;
  return halfplane_check(h2_curves(arc), cfg);
}

std::optional<std::pair<std::size_t, std::size_t>> find_interleaved_chords(const std::vector<Chord>& chords,
                                                                           double tol) {
  std::vector<double> ends;
  for (const auto& c : chords) {
    ends.push_back(c.first);
    ends.push_back(c.second);
  }
  std::vector<double> sorted = ends;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1] - sorted[i] <= tol)
      fail(ErrorKind::DuplicateParameter, "chord endpoints coincide at " + std::to_string(sorted[i]));
  for (std::size_t i = 0; i < chords.size(); ++i) {
    double a = std::min(chords[i].first, chords[i].second);
    double b = std::max(chords[i].first, chords[i].second);
    for (std::size_t j = i + 1; j < chords.size(); ++j) {
      bool c_in = chords[j].first > a && chords[j].first < b;
      bool d_in = chords[j].second > a && chords[j].second < b;
      if (c_in != d_in) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

bool noncrossing_chords_check(const std::vector<Chord>& chords, double tol) {
  return !find_interleaved_chords(chords, tol).has_value();
}

}  // namespace cp1
