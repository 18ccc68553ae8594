#include "cp1/arc_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "cp1/error.hpp"
#include "cp1/oracle.hpp"

namespace cp1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double scale_of(Complex z) { return 1.0 + std::abs(z); }

double mod_length(double s, double len) {
  double t = std::fmod(s, len);
  if (t < 0.0) t += len;
  if (t >= len) t -= len;
  return t;
}

double circular_gap(double a, double b, double len) {
  double d = mod_length(a - b, len);
  return std::min(d, len - d);
}

}  // namespace

Detour Detour::reversed() const {
  Detour d = *this;
  std::swap(d.s_in, d.s_out);
  d.from_left = !from_left;
  d.winding = -winding;
  return d;
}

Detour Detour::transformed(const MobiusMap& m) const {
  Detour d = *this;
  d.lift_map = m * lift_map;
  d.frame = frame.transformed(m);
  return d;
}

Complex piece_start(const ArcPiece& p) {
  return std::visit(
      [](const auto& x) -> Complex {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GeodesicSeg>) return x.start().z();
        else if constexpr (std::is_same_v<T, HypercycleSeg>) return x.start();
        else return x.entry_point();
      },
      p);
}

Complex piece_end(const ArcPiece& p) {
  return std::visit(
      [](const auto& x) -> Complex {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GeodesicSeg>) return x.end().z();
        else if constexpr (std::is_same_v<T, HypercycleSeg>) return x.end();
        else return x.exit_point();
      },
      p);
}

ArcPiece piece_reversed(const ArcPiece& p) {
  return std::visit([](const auto& x) -> ArcPiece { return x.reversed(); }, p);
}

ArcPiece piece_transformed(const ArcPiece& p, const MobiusMap& m) {
  return std::visit([&m](const auto& x) -> ArcPiece { return x.transformed(m); }, p);
}

bool is_detour(const ArcPiece& p) { return std::holds_alternative<Detour>(p); }

Complex DevelopedArc::start() const {
  if (pieces.empty()) fail(ErrorKind::DegenerateEndpoint, "empty arc");
  return piece_start(pieces.front());
}

Complex DevelopedArc::end() const {
  if (pieces.empty()) fail(ErrorKind::DegenerateEndpoint, "empty arc");
  return piece_end(pieces.back());
}

std::size_t DevelopedArc::detour_count() const {
  return static_cast<std::size_t>(std::count_if(pieces.begin(), pieces.end(), is_detour));
}

DevelopedArc polyline_arc(const std::vector<Complex>& points) {
  if (points.size() < 2) fail(ErrorKind::DegenerateEndpoint, "an arc needs at least two points");
  DevelopedArc arc;
  arc.polyline = points;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i].imag() > 0.0) || !(points[i + 1].imag() > 0.0))
      fail(ErrorKind::DegenerateEndpoint, "vertex " + std::to_string(points[i].imag() > 0.0 ? i + 1 : i) +
                                              " is not in the upper half-plane");
    if (std::abs(points[i] - points[i + 1]) <= 1e-12 * scale_of(points[i]))
      fail(ErrorKind::DegenerateEndpoint, "repeated vertex " + std::to_string(i + 1));
    arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(points[i]), HPoint::interior(points[i + 1])));
  }
  return arc;
}

namespace {

std::vector<LiftedAxis> lifts_around(const GraftedStructure& s, const std::vector<Complex>& pts, const Config& cfg) {
  if (s.is_uniformizing() || pts.empty()) return {};
  Complex c = pts.front();
  double r = 0.0;
  for (Complex z : pts) r = std::max(r, dist(c, z));
  return lifts_near(s, c, r + 1.5, cfg);
}

struct Hit {
  std::size_t seg = 0;
  double t = 0.0;
  int lift = 0;
  double s = 0.0;
  bool from_left = true;
};

// Parameter t in [0,1] where the geodesic segment meets the axis of the frame.
double crossing_param(const GeodesicSeg& g, const AxisFrame& f) {
  double lo = 0.0, hi = 1.0;
  double ulo = f.offset(g.point_at(0.0));
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    double um = f.offset(g.point_at(mid));
    if ((um > 0.0) == (ulo > 0.0)) {
      lo = mid;
      ulo = um;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DevelopedArc develop_polyline(const GraftedStructure& s, const std::vector<Complex>& points,
                              const DetourOverrides& overrides, const Config& cfg) {
  DevelopedArc base = polyline_arc(points);
  if (std::abs(points.front() - points.back()) <= cfg.tau_sep * points.front().imag())
    fail(ErrorKind::DegenerateEndpoint, "arc endpoints coincide");
  if (s.is_uniformizing()) return base;
  auto lifts = lifts_around(s, points, cfg);

  std::vector<Hit> hits;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& seg = std::get<GeodesicSeg>(base.pieces[i]);
    for (std::size_t l = 0; l < lifts.size(); ++l) {
      const AxisFrame& f = lifts[l].frame;
      double u0 = f.offset(points[i]), u1 = f.offset(points[i + 1]);
      if (std::abs(u0) < cfg.tau_sep || std::abs(u1) < cfg.tau_sep)
        fail(ErrorKind::TangentCrossing, "vertex on the axis of " + lifts[l].word.to_string());
      if ((u0 > 0.0) != (u1 > 0.0)) {
        double t = crossing_param(seg, f);
        hits.push_back({i, t, static_cast<int>(l), f.param(seg.point_at(t)), u0 > 0.0});
      } else if (min_abs_offset(seg, f) < cfg.tau_sep) {
        fail(ErrorKind::TangentCrossing, "segment " + std::to_string(i) + " touches the axis of " +
                                             lifts[l].word.to_string());
      }
    }
  }
  if (hits.empty()) return base;
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.t < b.t;
  });

  // refined vertex list: one crossing per segment at most
  std::vector<Complex> verts;
  std::vector<int> seg_hit;  // hit index on segment verts[i] -> verts[i+1], or -1
  verts.push_back(points[0]);
  std::size_t h = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& seg = std::get<GeodesicSeg>(base.pieces[i]);
    double prev_t = -1.0;
    while (h < hits.size() && hits[h].seg == i) {
      if (prev_t >= 0.0) {
        if (hits[h].t - prev_t < 1e-9) fail(ErrorKind::TangentCrossing, "axes crossed at the same point");
        verts.push_back(seg.point_at(0.5 * (prev_t + hits[h].t)));
      }
      seg_hit.push_back(static_cast<int>(h));
      prev_t = hits[h].t;
      ++h;
    }
    if (prev_t < 0.0) seg_hit.push_back(-1);
    verts.push_back(points[i + 1]);
  }

  // shift per region: a fraction of the gaps between crossings on the closed curve
  std::vector<double> region_shift(static_cast<std::size_t>(s.region_count()), cfg.detour_shift);
  for (int r = 0; r < s.region_count(); ++r) {
    double len = s.region(r).length;
    double gap = len;
    std::vector<double> ts;
    for (const auto& hit : hits)
      if (lifts[static_cast<std::size_t>(hit.lift)].region == r) ts.push_back(mod_length(hit.s, len));
    for (std::size_t a = 0; a < ts.size(); ++a)
      for (std::size_t b = a + 1; b < ts.size(); ++b) gap = std::min(gap, circular_gap(ts[a], ts[b], len));
    region_shift[static_cast<std::size_t>(r)] = std::min(cfg.detour_shift, 0.3 * gap);
  }

  DevelopedArc arc;
  arc.polyline = points;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    Complex prev = verts[i], next = verts[i + 1];
    if (seg_hit[i] < 0) {
      arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(prev), HPoint::interior(next)));
      continue;
    }
    int idx = seg_hit[i];
    const Hit& hit = hits[static_cast<std::size_t>(idx)];
    const LiftedAxis& L = lifts[static_cast<std::size_t>(hit.lift)];
    const int M = L.weight;
    const int e = hit.from_left ? 1 : -1;
    double delta = region_shift[static_cast<std::size_t>(L.region)];
    int d = e;
    if (auto it = overrides.find(idx); it != overrides.end()) {
      if (it->second.shift) delta = *it->second.shift;
      if (it->second.drift) d = *it->second.drift >= 0 ? 1 : -1;
    }
    if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "detour shift must be positive");
    const AxisFrame& f = L.frame;
    double rho = 0.5 * std::min({std::abs(f.offset(prev)), std::abs(f.offset(next)), delta});
    double s0 = hit.s - d * delta / 2.0;
    double sM = hit.s + d * delta / 2.0;
    Complex a_in = f.from_fermi(s0, e * rho), a_out = f.from_fermi(sM, -e * rho);
    arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(prev), HPoint::interior(a_in)));
    arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(a_in), HPoint::interior(f.from_fermi(s0, 0.0))));
    for (int j = 1; j <= M; ++j) {
      Detour det;
      det.region = L.region;
      det.lift = L.word;
      det.lift_map = L.map;
      det.frame = f;
      det.annulus = hit.from_left ? j : M + 1 - j;
      det.s_in = s0 + d * (j - 1) * delta / M;
      det.s_out = s0 + d * j * delta / M;
      det.from_left = hit.from_left;
      arc.pieces.emplace_back(det);
    }
    arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(f.from_fermi(sM, 0.0)), HPoint::interior(a_out)));
    arc.pieces.emplace_back(GeodesicSeg(HPoint::interior(a_out), HPoint::interior(next)));
  }
  return arc;
}

std::vector<LiftedAxis> arc_lifts(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg) {
  std::vector<Complex> pts;
  for (const auto& p : arc.pieces) {
    pts.push_back(piece_start(p));
    pts.push_back(piece_end(p));
  }
  auto lifts = lifts_around(s, pts, cfg);
  for (const auto& p : arc.pieces) {
    const auto* d = std::get_if<Detour>(&p);
    if (!d) continue;
    LiftedAxis la;
    la.region = d->region;
    la.word = d->lift;
    la.map = d->lift_map;
    la.frame = d->frame;
    la.repelling = d->frame.repelling();
    la.attracting = d->frame.attracting();
    la.weight = s.region(d->region).weight;
    bool known = std::any_of(lifts.begin(), lifts.end(), [&](const LiftedAxis& x) { return same_lift(x, la); });
    if (!known) lifts.push_back(la);
  }
  return lifts;
}

double bank_position(double s, bool left_bank) {
  double a = std::atan(s);
  return left_bank ? kPi / 2.0 + a : 3.0 * kPi / 2.0 - a;
}

void validate_bubbleable(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg) {
  if (arc.pieces.empty()) fail(ErrorKind::DegenerateEndpoint, "empty arc");
  Complex a = arc.start(), b = arc.end();
  if (is_detour(arc.pieces.front()) || is_detour(arc.pieces.back()) || !(a.imag() > 0.0) || !(b.imag() > 0.0))
    fail(ErrorKind::DegenerateEndpoint, "arc endpoints must be interior points of H^2");
  if (arc.provenance == ArcProvenance::Polyline && dist(a, b) < cfg.tau_sep)
    fail(ErrorKind::DegenerateEndpoint, "arc endpoints coincide");
  for (std::size_t i = 0; i + 1 < arc.pieces.size(); ++i) {
    Complex e = piece_end(arc.pieces[i]), st = piece_start(arc.pieces[i + 1]);
    if (std::abs(e - st) > 1e3 * cfg.tau_alg * scale_of(e))
      fail(ErrorKind::InvalidArgument, "pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                           " do not meet");
  }
  for (std::size_t i = 0; i < arc.pieces.size(); ++i) {
    const auto* d = std::get_if<Detour>(&arc.pieces[i]);
    if (!d) continue;
    if (d->region < 0 || d->region >= s.region_count()) fail(ErrorKind::BadIndex, "detour region");
    if (d->annulus < 1 || d->annulus > s.region(d->region).weight) fail(ErrorKind::BadIndex, "detour annulus");
    if (d->winding != 0) fail(ErrorKind::InvalidArgument, "detours with nonzero winding are not supported");
    if (std::abs(d->s_in - d->s_out) <= cfg.tau_sep)
      fail(ErrorKind::DegenerateEndpoint, "detour " + std::to_string(i) + " has equal entry and exit");
  }

  // (a) H^2 pieces pairwise disjoint away from shared endpoints
  std::vector<std::size_t> hidx;
  for (std::size_t i = 0; i < arc.pieces.size(); ++i)
    if (!is_detour(arc.pieces[i])) hidx.push_back(i);
  auto as_curve = [&](std::size_t i) -> Curve {
    if (const auto* g = std::get_if<GeodesicSeg>(&arc.pieces[i])) return *g;
    return std::get<HypercycleSeg>(arc.pieces[i]);
  };
  for (std::size_t x = 0; x < hidx.size(); ++x) {
    Curve cx = as_curve(hidx[x]);
    auto bx = curve_bbox(cx);
    for (std::size_t y = x + 1; y < hidx.size(); ++y) {
      Curve cy = as_curve(hidx[y]);
      auto by = curve_bbox(cy);
      double pad = 1e-6 * (1.0 + std::max(std::abs(bx[2]), std::abs(by[2])));
      if (bx[0] > by[2] + pad || by[0] > bx[2] + pad || bx[1] > by[3] + pad || by[1] > bx[3] + pad) continue;
      bool adjacent = hidx[y] == hidx[x] + 1;
      std::string witness = "pieces " + std::to_string(hidx[x]) + " and " + std::to_string(hidx[y]);
      std::vector<Complex> pts;
      try {
        pts = seg_intersect(cx, cy, cfg.tau_sep);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Tangency) throw;
        if (!adjacent) fail(ErrorKind::SelfIntersection, witness + " touch: " + e.detail());
        // adjacent pieces: a near-touch is only allowed at the joint
        pts.clear();
      }
      Complex joint = piece_end(arc.pieces[hidx[x]]);
      for (Complex z : pts) {
        if (adjacent && std::abs(z - joint) <= 1e-7 * scale_of(joint)) continue;
        fail(ErrorKind::SelfIntersection,
             witness + " meet at (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
      }
    }
  }

  // simple on the surface: no translate of the arc meets it
  if (!hidx.empty()) {
    Complex base_pt = piece_start(arc.pieces[hidx.front()]);
    double reach = 0.0;
    std::vector<Curve> curves;
    std::vector<std::array<double, 4>> boxes;
    for (std::size_t i : hidx) {
      curves.push_back(as_curve(i));
      boxes.push_back(curve_bbox(curves.back()));
      reach = std::max({reach, dist(base_pt, piece_start(arc.pieces[i])), dist(base_pt, piece_end(arc.pieces[i]))});
    }
    int radius = effective_radius(s.rep().genus(), cfg.simplicity_radius, cfg);
    auto ball = cached_ball(s.rep(), radius, cfg);
    for (const auto& el : *ball) {
      if (el.word.is_identity()) continue;
      if (dist(base_pt, el.map.apply(base_pt)) > 2.0 * reach + 1.0) continue;
      for (std::size_t x = 0; x < curves.size(); ++x) {
        Curve moved = curve_transformed(curves[x], el.map);
        auto bm = curve_bbox(moved);
        for (std::size_t y = 0; y < curves.size(); ++y) {
          const auto& by = boxes[y];
          double pad = 1e-6 * (1.0 + std::abs(by[2]));
          if (bm[0] > by[2] + pad || by[0] > bm[2] + pad || bm[1] > by[3] + pad || by[1] > bm[3] + pad) continue;
          std::string witness = "piece " + std::to_string(hidx[x]) + " moved by " + el.word.to_string() +
                                " and piece " + std::to_string(hidx[y]);
          std::vector<Complex> pts;
          try {
            pts = seg_intersect(moved, curves[y], cfg.tau_sep);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::Tangency) throw;
            fail(ErrorKind::SelfIntersection, witness + " touch (not simple on the surface)");
          }
          if (!pts.empty()) fail(ErrorKind::SelfIntersection, witness + " meet (not simple on the surface)");
        }
      }
    }
  }

  // (b) detour chords per lift do not interleave
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < arc.pieces.size(); ++i) {
    const auto* d = std::get_if<Detour>(&arc.pieces[i]);
    if (!d) continue;
    bool placed = false;
    for (auto& g : groups) {
      const auto& d0 = std::get<Detour>(arc.pieces[g.front()]);
      if (d0.region == d->region &&
          relate_geodesics(d0.frame.repelling(), d0.frame.attracting(), d->frame.repelling(),
                           d->frame.attracting()) == GeodesicRelation::Same) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  for (const auto& g : groups) {
    const auto& d0 = std::get<Detour>(arc.pieces[g.front()]);
    std::vector<Chord> chords;
    for (std::size_t i : g) {
      const auto& d = std::get<Detour>(arc.pieces[i]);
      // parameters in the frame of the first detour of the group
      double shift = d0.frame.param(d.entry_point()) - d.s_in;
      bool same_dir = d0.frame.attracting().approx_equal(d.frame.attracting(), 1e-6);
      double si = d.s_in + shift, so = d.s_out + shift;
      bool left = d.from_left;
      if (!same_dir) {
        si = d0.frame.param(d.entry_point());
        so = d0.frame.param(d.exit_point());
        left = !left;
      }
      chords.emplace_back(bank_position(si, left), bank_position(so, !left));
    }
    std::optional<std::pair<std::size_t, std::size_t>> bad;
    try {
      bad = find_interleaved_chords(chords, 1e-12);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DuplicateParameter) throw;
      fail(ErrorKind::SelfIntersection, "detours share an endpoint on the axis of " + d0.lift.to_string());
    }
    if (bad)
      fail(ErrorKind::InterleavedDetours, "detours " + std::to_string(g[bad->first]) + " and " +
                                              std::to_string(g[bad->second]) + " interleave on the axis of " +
                                              d0.lift.to_string());
  }
}

const AnnulusTable* CrossingTable::find(int region, int annulus) const {
  for (const auto& t : tables)
    if (t.region == region && t.annulus == annulus) return &t;
  return nullptr;
}

int CrossingTable::crossing_count() const {
  int n = 0;
  std::vector<int> regions;
  for (const auto& t : tables)
    if (std::find(regions.begin(), regions.end(), t.region) == regions.end()) {
      regions.push_back(t.region);
      n += t.count();
    }
  return n;
}

namespace {

struct Chain {
  std::size_t first = 0;  // piece index of the first detour
  std::size_t count = 0;
};

std::vector<Chain> detour_chains(const DevelopedArc& arc) {
  std::vector<Chain> out;
  for (std::size_t i = 0; i < arc.pieces.size(); ++i) {
    if (!is_detour(arc.pieces[i])) continue;
    if (i > 0 && is_detour(arc.pieces[i - 1])) {
      ++out.back().count;
    } else {
      out.push_back({i, 1});
    }
  }
  return out;
}

bool ends_on(const ArcPiece& p, const AxisFrame& f) {
  auto on = [&](Complex z) { return std::abs(f.offset(z)) <= 1e-9; };
  return on(piece_start(p)) || on(piece_end(p));
}

double piece_min_offset(const ArcPiece& p, const AxisFrame& f) {
  if (const auto* g = std::get_if<GeodesicSeg>(&p)) return min_abs_offset(*g, f);
  const auto& h = std::get<HypercycleSeg>(p);
  double best = kInf;
  for (int i = 0; i <= 64; ++i) best = std::min(best, std::abs(f.offset(h.point_at(i / 64.0))));
  return best;
}

}  // namespace

CrossingTable extract_crossings(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg) {
  CrossingTable table;
  if (s.is_uniformizing()) {
    if (arc.has_detours()) fail(ErrorKind::TransversalityViolation, "detour on a structure without grafting");
    return table;
  }
  table.lifts = arc_lifts(s, arc, cfg);
  const auto chains = detour_chains(arc);

  std::vector<bool> is_leg(arc.pieces.size(), false);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const Chain& ch = chains[c];
    const auto& d0 = std::get<Detour>(arc.pieces[ch.first]);
    const int M = s.region(d0.region).weight;
    const int e = d0.from_left ? 1 : -1;
    std::string where = "crossing " + std::to_string(c) + " of " + d0.lift.to_string();
    if (ch.first == 0 || ch.first + ch.count >= arc.pieces.size())
      fail(ErrorKind::TransversalityViolation, where + " has an endpoint inside the grafting region");
    if (static_cast<int>(ch.count) != M)
      fail(ErrorKind::TransversalityViolation, where + " passes " + std::to_string(ch.count) + " of " +
                                                   std::to_string(M) + " annuli");
    int drift = d0.s_out > d0.s_in ? 1 : -1;
    for (std::size_t j = 0; j < ch.count; ++j) {
      const auto& d = std::get<Detour>(arc.pieces[ch.first + j]);
      int expect = d0.from_left ? static_cast<int>(j) + 1 : M - static_cast<int>(j);
      if (d.region != d0.region || d.from_left != d0.from_left || d.annulus != expect ||
          (d.s_out > d.s_in ? 1 : -1) != drift ||
          relate_geodesics(d.frame.repelling(), d.frame.attracting(), d0.frame.repelling(),
                           d0.frame.attracting()) != GeodesicRelation::Same)
        fail(ErrorKind::TransversalityViolation, where + " is not a transversal chain of detours");
      if (j > 0) {
        const auto& dp = std::get<Detour>(arc.pieces[ch.first + j - 1]);
        if (std::abs(dp.exit_point() - d.entry_point()) > 1e-9 * scale_of(d.entry_point()))
          fail(ErrorKind::TransversalityViolation, where + " has a gap between annuli");
      }
    }
    const auto* in_leg = std::get_if<GeodesicSeg>(&arc.pieces[ch.first - 1]);
    const auto* out_leg = std::get_if<GeodesicSeg>(&arc.pieces[ch.first + ch.count]);
    if (!in_leg || !out_leg) fail(ErrorKind::TransversalityViolation, where + " needs geodesic legs");
    const auto& dl = std::get<Detour>(arc.pieces[ch.first + ch.count - 1]);
    double u_in = d0.frame.offset(in_leg->start().z());
    double u_out = dl.frame.offset(out_leg->end().z());
    if (e * u_in <= 0.0 || e * u_out >= 0.0)
      fail(ErrorKind::TransversalityViolation, where + " enters and leaves on the same side");
    if (std::abs(d0.frame.param(in_leg->start().z()) - d0.s_in) > 1e-9 * (1.0 + std::abs(d0.s_in)) ||
        std::abs(dl.frame.param(out_leg->end().z()) - dl.s_out) > 1e-9 * (1.0 + std::abs(dl.s_out)))
      fail(ErrorKind::TransversalityViolation, where + " legs are not perpendicular to the axis");
    is_leg[ch.first - 1] = true;
    is_leg[ch.first + ch.count] = true;
  }

  // H^2 pieces keep off every axis they do not end on
  double clearance = kInf;
  for (std::size_t i = 0; i < arc.pieces.size(); ++i) {
    const auto& p = arc.pieces[i];
    if (is_detour(p)) continue;
    for (const auto& L : table.lifts) {
      if (is_leg[i] && ends_on(p, L.frame)) continue;
      double u0 = L.frame.offset(piece_start(p)), u1 = L.frame.offset(piece_end(p));
      if ((u0 > 0.0) != (u1 > 0.0))
        fail(ErrorKind::TransversalityViolation, "piece " + std::to_string(i) + " crosses the axis of " +
                                                     L.word.to_string() + " without a detour");
      double m = piece_min_offset(p, L.frame);
      if (m < cfg.tau_sep)
        fail(ErrorKind::TangentCrossing, "piece " + std::to_string(i) + " touches the axis of " + L.word.to_string());
      clearance = std::min(clearance, m / (2.0 * (L.weight + 1)));
    }
  }
  table.clearance = clearance;
  if (chains.empty()) return table;

  EpsilonContext ctx{table.lifts, clearance};
  const double eps = choose_epsilon(s, ctx, cfg);
  table.epsilon = eps;

  int unit = 0;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t j = 0; j < chains[c].count; ++j, ++unit) {
      std::size_t piece = chains[c].first + j;
      const auto& d = std::get<Detour>(arc.pieces[piece]);
      const auto& reg = s.region(d.region);
      const int M = reg.weight;
      const int e = d.from_left ? 1 : -1;
      CrossingRecord r;
      r.region = d.region;
      r.annulus = d.annulus;
      r.unit = unit;
      r.chain = static_cast<int>(c);
      r.position = static_cast<int>(j) + 1;
      r.lift = d.lift;
      r.lift_map = d.lift_map;
      r.frame = d.frame;
      r.from_left = d.from_left;
      r.entry_side = e;
      r.in = {d.s_in, d.from_left};
      r.out = {d.s_out, !d.from_left};
      r.in_twin = {d.s_in, !d.from_left};
      r.out_twin = {d.s_out, d.from_left};
      // the lift frame differs from the base frame by a deck map; parameters agree modulo the length
      double shift = reg.base_frame.param(d.lift_map.inverse().apply(d.entry_point())) - d.s_in;
      r.t_in = mod_length(d.s_in + shift, reg.length);
      r.t_out = mod_length(d.s_out + shift, reg.length);
      double cu = band_center(M, d.annulus, eps);
      r.center_u = cu;
      r.center_in = d.frame.from_fermi(d.s_in, cu);
      r.center_out = d.frame.from_fermi(d.s_out, cu);
      r.anchor_in = d.frame.from_fermi(d.s_in, cu + e * eps);
      r.anchor_out = d.frame.from_fermi(d.s_out, cu - e * eps);

      AnnulusTable* t = nullptr;
      int ti = 0;
      for (auto& x : table.tables) {
        if (x.region == r.region && x.annulus == r.annulus) {
          t = &x;
          break;
        }
        ++ti;
      }
      if (!t) {
        table.tables.push_back({});
        t = &table.tables.back();
        t->region = r.region;
        t->annulus = r.annulus;
        t->length = reg.length;
      }
      r.index = t->count() + 1;
      table.units.push_back({ti, t->count(), piece});
      t->records.push_back(r);
    }
  }

  for (auto& t : table.tables) {
    const double len = t.length;
    // distinct entry/exit parameters on the closed curve
    std::vector<double> ps;
    for (const auto& r : t.records) {
      ps.push_back(r.t_in);
      ps.push_back(r.t_out);
    }
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = a + 1; b < ps.size(); ++b)
        if (circular_gap(ps[a], ps[b], len) < cfg.tau_sep)
          fail(ErrorKind::TangentCrossing, "entry/exit parameters collide in region " + std::to_string(t.region) +
                                               " annulus " + std::to_string(t.annulus));
    const auto& first = t.records.front();
    t.orientation = first.out.s > first.in.s ? 1 : -1;
    for (auto& r : t.records) r.coherence = t.orientation * (r.out.s > r.in.s ? 1 : -1);
    std::vector<double> pos;
    for (const auto& r : t.records) pos.push_back(mod_length(t.orientation * (r.t_in - first.t_in), len));
    std::vector<int> order(t.records.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)];
    });
    t.sigma.clear();
    for (int k : order) t.sigma.push_back(k + 1);
    const std::size_t n = t.records.size();
    t.coherence_matrix.assign(n, std::vector<int>(n, 1));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) t.coherence_matrix[k][l] = t.records[k].coherence * t.records[l].coherence;
  }
  return table;
}

CrossingDatum z2_act(int sign, const CrossingDatum& x) {
  if (sign != 1 && sign != -1) fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  if (sign == 1) return x;
  CrossingDatum y = x;
  switch (x.object) {
    case CrossingObject::In: y.object = CrossingObject::Out; break;
    case CrossingObject::Out: y.object = CrossingObject::In; break;
    case CrossingObject::AnchorIn: y.object = CrossingObject::AnchorOut; break;
    case CrossingObject::AnchorOut: y.object = CrossingObject::AnchorIn; break;
    case CrossingObject::Zeta: y.object = CrossingObject::Xi; break;
    case CrossingObject::Xi: y.object = CrossingObject::Zeta; break;
  }
  return y;
}

std::string to_string(CrossingObject o) {
  switch (o) {
    case CrossingObject::In: return "I";
    case CrossingObject::Out: return "O";
    case CrossingObject::AnchorIn: return "I^-1";
    case CrossingObject::AnchorOut: return "O^+1";
    case CrossingObject::Zeta: return "zeta";
    case CrossingObject::Xi: return "xi";
  }
  return "?";
}

DevelopedArc reverse(const DevelopedArc& arc) {
  DevelopedArc r;
  r.provenance = arc.provenance;
  r.polyline.assign(arc.polyline.rbegin(), arc.polyline.rend());
  for (auto it = arc.pieces.rbegin(); it != arc.pieces.rend(); ++it) r.pieces.push_back(piece_reversed(*it));
  return r;
}

}  // namespace cp1
