#include "cp1/surgery.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

double mod_len(double s, double len) {
  double t = std::fmod(s, len);
  if (t < 0.0) t += len;
  if (t >= len) t -= len;
  return t;
}

double scale_of(Complex z) { return 1.0 + std::abs(z); }

// hyperbolic gap allowed between consecutive pieces built in different charts
constexpr double kJointTolerance = 1e-7;

}  // namespace

GraftedStructure graft(const GraftedStructure& s, const GroupWord& word, int m, const Config& cfg) {
  if (m < 1) fail(ErrorKind::InvalidArgument, "grafting multiplicity must be >= 1");
  WeightedMulticurve mc = s.multicurve();
  bool merged = false;
  for (auto& c : mc.components) {
    if (same_class(s.rep(), c.word, word, cfg)) {
      c.weight += m;
      merged = true;
      break;
    }
  }
  if (!merged) mc.components.push_back({word, m});
  return build_structure(s.rep_ptr(), mc, cfg);
}

bool same_arc(const DevelopedArc& a, const DevelopedArc& b, double tol) {
  if (a.pieces.size() != b.pieces.size()) return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    const auto& p = a.pieces[i];
    const auto& q = b.pieces[i];
    if (p.index() != q.index()) return false;
    Complex ps = piece_start(p), qs = piece_start(q), pe = piece_end(p), qe = piece_end(q);
    if (std::abs(ps - qs) > tol * scale_of(ps) || std::abs(pe - qe) > tol * scale_of(pe)) return false;
    if (const auto* d = std::get_if<Detour>(&p)) {
      const auto& e = std::get<Detour>(q);
      if (d->region != e.region || d->annulus != e.annulus || d->from_left != e.from_left) return false;
    }
  }
  return true;
}

bool same_presentation(const BubbleRecord& a, const BubbleRecord& b, const Config& cfg) {
  return same_structure(a.base, b.base, cfg) && same_arc(a.arc, b.arc, 1e3 * cfg.tau_alg);
}

BranchedStructure bubble(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg) {
  validate_bubbleable(s, arc, cfg);
  if (arc.has_detours()) extract_crossings(s, arc, cfg);
  return BranchedStructure(BubbleRecord{s, arc});
}

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::FollowBeta: return "FollowBeta";
    case StepKind::FollowZeta: return "FollowZeta";
    case StepKind::FollowGamma: return "FollowGamma";
    case StepKind::FollowXi: return "FollowXi";
    case StepKind::OffAxisHop: return "OffAxisHop";
  }
  return "?";
}

namespace {

int wrap_position(int k, int n) { return ((k - 1) % n + n) % n + 1; }

int alpha_position(const AnnulusTable& t, int record) {
  for (std::size_t j = 0; j < t.sigma.size(); ++j)
    if (t.sigma[j] == record) return static_cast<int>(j) + 1;
  fail(ErrorKind::BadIndex, "record not in the cyclic order");
}

}  // namespace

MachineState machine_successor(const AnnulusTable& t, const MachineState& st) {
  const int n = t.count();
  int e = t.alpha(st.k).coherence;
  int d = st.omega * e;
  int k2 = wrap_position(st.k + d, n);
  return {k2, d * t.alpha(k2).coherence};
}

MachineState machine_predecessor(const AnnulusTable& t, const MachineState& st) {
  const int n = t.count();
  int d = st.omega * t.alpha(st.k).coherence;
  int k = wrap_position(st.k - d, n);
  return {k, d * t.alpha(k).coherence};
}

namespace {

struct Sheet {
  MobiusMap map;
  GroupWord word;
};

class Router {
 public:
  Router(const GraftedStructure& s, const DevelopedArc& arc, const CrossingTable& table, const Config& cfg)
      : s_(s), arc_(arc), t_(table), cfg_(cfg), n_(static_cast<int>(table.units.size())) {
    coverage_.resize(t_.tables.size());
  }

  void run(ReroutePlan& plan) {
    Sheet sheet{MobiusMap(), GroupWord()};
    traverse_gap(0, true, sheet);
    if (n_ == 0) {
      finish(plan, sheet);
      return;
    }
    int u = 0, omega = 1;
    std::set<std::pair<int, int>> visited;
    for (;;) {
      if (!visited.insert({u, omega}).second)
        fail(ErrorKind::EmbeddingCheckFailed, "crossing machine revisits unit " + std::to_string(u));
      const UnitRef& ref = t_.units[static_cast<std::size_t>(u)];
      const AnnulusTable& tab = t_.tables[static_cast<std::size_t>(ref.table)];
      const CrossingRecord& rec = tab.records[static_cast<std::size_t>(ref.record)];

      // follow omega.zeta^omega to omega.O
      RouteStep st0 = base_step(omega == 1 ? StepKind::FollowZeta : StepKind::FollowXi, rec, omega, sheet);
      use(omega == 1 ? 'z' : 'x', u);
      if (omega == 1)
        add_geodesic(rec.anchor_in, rec.center_out, sheet);
      else
        add_geodesic(rec.anchor_out, rec.center_in, sheet);
      close_step(st0);
      cover_unit(ref.table, rec);

      const int N = tab.count();
      const int k = alpha_position(tab, ref.record + 1);
      MachineState next = machine_successor(tab, {k, omega});
      const CrossingRecord& rec2 = tab.alpha(next.k);
      const int omega2 = next.omega;
      const int D = omega * rec.coherence;
      const int dir = D * tab.orientation;
      const double len = tab.length;
      (void)N;

      double a = omega == 1 ? rec.out.s : rec.in.s;
      double t_a = omega == 1 ? rec.t_out : rec.t_in;
      double s_t = omega2 == 1 ? rec2.in.s : rec2.out.s;
      double t_t = omega2 == 1 ? rec2.t_in : rec2.t_out;
      double t_o = omega2 == 1 ? rec2.t_out : rec2.t_in;
      double delta = mod_len(dir * (t_t - t_a), len);
      double delta_o = mod_len(dir * (t_o - t_a), len);
      double b = a + dir * delta;
      long long nper = std::llround((b - s_t) / len);

      const auto& reg = s_.region(rec.region);
      MobiusMap hol_n = evaluate(s_.rep(), reg.word.power(static_cast<int>(nper)));
      // chart change from this sheet to the next one
      MobiusMap R = rec.lift_map * hol_n * rec2.lift_map.inverse();
      Sheet sheet2{sheet.map * R, sheet.word * rec.lift * reg.word.power(static_cast<int>(nper)) * rec2.lift.inverse()};
      Complex target2 = omega2 == 1 ? rec2.center_in : rec2.center_out;
      Complex target_end2 = omega2 == 1 ? rec2.anchor_out : rec2.anchor_in;
      Complex target = R.apply(target2);
      Complex target_end = R.apply(target_end2);
      const AxisFrame& moving = rec.frame;

      const double tiny = 1e-12 * (1.0 + len);
      if (delta_o > tiny && delta_o < delta) {
        // the other end of the target comes first: leave the center curve
        GeodesicSeg tail(HPoint::interior(target), HPoint::interior(target_end));
        double pa = moving.param(tail.point_at(0.0)), pb = moving.param(tail.point_at(1.0));
        double tq = 0.5;
        if ((a - pa) * (a - pb) < 0.0) {
          double lo = 0.0, hi = 1.0;
          for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((moving.param(tail.point_at(mid)) - a) * (pb - pa) < 0.0) lo = mid;
            else hi = mid;
          }
          tq = 0.5 * (lo + hi);
        }
        Complex q = tail.point_at(tq);
        RouteStep hop = base_step(StepKind::OffAxisHop, rec2, omega2, sheet2);
        use('h', rec2.unit);
        add_geodesic(moving.from_fermi(a, rec.center_u), q, sheet);
        close_step(hop);
        RouteStep xi = base_step(omega2 == 1 ? StepKind::FollowXi : StepKind::FollowZeta, rec2, omega2, sheet2);
        use(omega2 == 1 ? 'x' : 'z', rec2.unit);
        add_geodesic(q, target_end, sheet);
        close_step(xi);
        cover_unit(ref.table, rec2);
      } else {
        RouteStep g = base_step(StepKind::FollowGamma, rec, omega, sheet);
        g.direction = dir;
        g.from = a;
        g.to = b;
        use_gamma(ref.table, rec.index, rec2.index, D);
        if (rec.center_u == 0.0)
          add_geodesic(moving.from_fermi(a, 0.0), moving.from_fermi(b, 0.0), sheet);
        else
          add_piece(HypercycleSeg(moving, rec.center_u, a, b), sheet);
        close_step(g);
        cover(ref.table, dir > 0 ? t_a : t_a - delta, delta);
        RouteStep xi = base_step(omega2 == 1 ? StepKind::FollowXi : StepKind::FollowZeta, rec2, omega2, sheet2);
        use(omega2 == 1 ? 'x' : 'z', rec2.unit);
        add_geodesic(target2, target_end2, sheet2);
        close_step(xi);
        cover_unit(ref.table, rec2);
      }
      sheet = sheet2;

      if (omega2 == 1) {
        int gap = rec2.unit + 1;
        traverse_gap(gap, true, sheet);
        if (gap == n_) break;
        u = gap;
        omega = 1;
      } else {
        int gap = rec2.unit;
        if (gap == 0) fail(ErrorKind::EmbeddingCheckFailed, "crossing machine ran back to the start of the arc");
        traverse_gap(gap, false, sheet);
        u = gap - 1;
        omega = -1;
      }
    }
    finish(plan, sheet);
  }

 private:
  RouteStep base_step(StepKind kind, const CrossingRecord& rec, int omega, const Sheet& sheet) {
    RouteStep st;
    st.kind = kind;
    st.unit = rec.unit;
    st.region = rec.region;
    st.annulus = rec.annulus;
    st.record = rec.index;
    st.omega = omega;
    st.sheet = sheet.word;
    st.lift = rec.lift;
    st.first_piece = charted_.size();
    return st;
  }

  void close_step(RouteStep& st) {
    st.piece_count = charted_.size() - st.first_piece;
    steps_.push_back(st);
  }

  void add_piece(const ArcPiece& p, const Sheet& sheet) {
    Complex a = piece_start(p), b = piece_end(p);
    if (std::abs(a - b) <= 1e-13 * scale_of(a)) return;
    charted_.push_back({sheet.word, p});
    maps_.push_back(sheet.map);
  }

  void add_geodesic(Complex a, Complex b, const Sheet& sheet) {
    if (std::abs(a - b) <= 1e-13 * scale_of(a)) return;
    add_piece(GeodesicSeg(HPoint::interior(a), HPoint::interior(b)), sheet);
  }

  void use(char what, int unit) {
    if (!used_.insert({what, unit, 0, 0}).second)
      fail(ErrorKind::EmbeddingCheckFailed,
           std::string("auxiliary arc ") + what + " of unit " + std::to_string(unit) + " used twice");
  }

  void use_gamma(int table, int k, int k2, int d) {
    if (!used_.insert({'g', table * 100000 + k, k2, d}).second)
      fail(ErrorKind::EmbeddingCheckFailed, "center arc used twice in table " + std::to_string(table));
  }

  void cover(int table, double start, double length) {
    coverage_[static_cast<std::size_t>(table)].emplace_back(start, length);
  }

  void cover_unit(int table, const CrossingRecord& r) {
    double lo = r.out.s > r.in.s ? r.t_in : r.t_out;
    cover(table, lo, std::abs(r.out.s - r.in.s));
  }

  // Pieces of the arc strictly between unit gap-1 and unit gap.
  std::vector<ArcPiece> gap_pieces(int gap) const {
    std::vector<ArcPiece> out;
    const auto& pcs = arc_.pieces;
    if (n_ == 0) return pcs;
    if (gap > 0 && gap < n_ &&
        t_.units[static_cast<std::size_t>(gap)].piece == t_.units[static_cast<std::size_t>(gap - 1)].piece + 1)
      return out;
    std::size_t lo = 0, hi = pcs.size();
    std::optional<Complex> head_from, tail_to;
    if (gap > 0) {
      std::size_t ol = t_.units[static_cast<std::size_t>(gap - 1)].piece + 1;
      head_from = record_of(gap - 1).anchor_out;
      lo = ol;
    }
    if (gap < n_) {
      std::size_t il = t_.units[static_cast<std::size_t>(gap)].piece - 1;
      tail_to = record_of(gap).anchor_in;
      hi = il + 1;
    }
    if (hi == lo + 1 && head_from && tail_to) {
      out.emplace_back(GeodesicSeg(HPoint::interior(*head_from), HPoint::interior(*tail_to)));
      return out;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      if (i == lo && head_from) {
        out.emplace_back(GeodesicSeg(HPoint::interior(*head_from), HPoint::interior(piece_end(pcs[i]))));
      } else if (i + 1 == hi && tail_to) {
        out.emplace_back(GeodesicSeg(HPoint::interior(piece_start(pcs[i])), HPoint::interior(*tail_to)));
      } else {
        out.push_back(pcs[i]);
      }
    }
    return out;
  }

  const CrossingRecord& record_of(int unit) const {
    const UnitRef& r = t_.units[static_cast<std::size_t>(unit)];
    return t_.tables[static_cast<std::size_t>(r.table)].records[static_cast<std::size_t>(r.record)];
  }

  void traverse_gap(int gap, bool forward, const Sheet& sheet) {
    RouteStep st;
    st.kind = StepKind::FollowBeta;
    st.omega = forward ? 1 : -1;
    st.sheet = sheet.word;
    st.from = gap;
    st.to = gap;
    st.first_piece = charted_.size();
    if (!used_.insert({'b', gap, 0, 0}).second)
      fail(ErrorKind::EmbeddingCheckFailed, "arc segment " + std::to_string(gap) + " used twice");
    auto pcs = gap_pieces(gap);
    if (!forward) {
      std::reverse(pcs.begin(), pcs.end());
      for (auto& p : pcs) p = piece_reversed(p);
    }
    for (const auto& p : pcs) add_piece(p, sheet);
    close_step(st);
  }

  void finish(ReroutePlan& plan, const Sheet& sheet) {
    DevelopedArc out;
    out.provenance = ArcProvenance::Rerouted;
    for (std::size_t i = 0; i < charted_.size(); ++i) out.pieces.push_back(piece_transformed(charted_[i].local, maps_[i]));
    plan.rerouted = std::move(out);
    plan.charted = charted_;
    plan.steps = steps_;
    plan.end_map = sheet.map;
    plan.end_word = sheet.word;
    plan.engulfed.assign(static_cast<std::size_t>(s_.region_count()), 0);
    for (std::size_t ti = 0; ti < t_.tables.size(); ++ti)
      if (covers_circle(coverage_[ti], t_.tables[ti].length)) ++plan.engulfed[static_cast<std::size_t>(t_.tables[ti].region)];
  }

  static bool covers_circle(std::vector<std::pair<double, double>> iv, double len) {
    if (iv.empty()) return false;
    std::vector<std::pair<double, double>> segs;
    for (auto [st, l] : iv) {
      if (l >= len) return true;
      double a = mod_len(st, len);
      if (a + l <= len) {
        segs.emplace_back(a, a + l);
      } else {
        segs.emplace_back(a, len);
        segs.emplace_back(0.0, a + l - len);
      }
    }
    std::sort(segs.begin(), segs.end());
    const double tol = 1e-9 * (1.0 + len);
    double reach = 0.0;
    for (auto [a, b] : segs) {
      if (a > reach + tol) return false;
      reach = std::max(reach, b);
    }
    return reach >= len - tol;
  }

  const GraftedStructure& s_;
  const DevelopedArc& arc_;
  const CrossingTable& t_;
  const Config& cfg_;
  int n_;
  std::vector<SheetPiece> charted_;
  std::vector<MobiusMap> maps_;
  std::vector<RouteStep> steps_;
  std::set<std::tuple<char, int, int, int>> used_;
  std::vector<std::vector<std::pair<double, double>>> coverage_;
};

}  // namespace

ReroutePlan reroute(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg) {
  if (arc.provenance != ArcProvenance::Polyline && arc.has_detours())
    fail(ErrorKind::InvalidArgument, "reroute expects an arc with detours from a polyline");
  validate_bubbleable(s, arc, cfg);
  ReroutePlan plan;
  plan.source = s;
  plan.source_arc = arc;
  plan.table = extract_crossings(s, arc, cfg);
  Router router(s, arc, plan.table, cfg);
  router.run(plan);

  WeightedMulticurve mc;
  for (int r = 0; r < s.region_count(); ++r) {
    const auto& c = s.multicurve().components[static_cast<std::size_t>(r)];
    int w = c.weight - plan.engulfed[static_cast<std::size_t>(r)];
    if (w > 0) mc.components.push_back({c.word, w});
  }
  plan.result = build_structure(s.rep_ptr(), mc, cfg);

  ChartedPath path;
  std::map<std::vector<int>, std::size_t> chart_index;
  for (const auto& sp : plan.charted) {
    auto [it, fresh] = chart_index.emplace(sp.sheet.letters(), path.charts.size());
    if (fresh) path.charts.push_back(sp.sheet);
    path.chart_of.push_back(it->second);
    path.local.push_back(std::holds_alternative<GeodesicSeg>(sp.local) ? Curve(std::get<GeodesicSeg>(sp.local))
                                                                       : Curve(std::get<HypercycleSeg>(sp.local)));
  }
  path.joined.assign(path.local.size(), true);
  if (plan.charted.empty()) {
    plan.endpoint_residual = dist(arc.start(), arc.end()) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    plan.endpoint_residual = std::max(dist(piece_start(plan.charted.front().local), arc.start()),
                                      dist(piece_end(plan.charted.back().local), arc.end()));
    if (!(plan.charted.front().sheet.is_identity())) plan.endpoint_residual = std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 1; i < plan.charted.size(); ++i) {
    const auto& prev = plan.charted[i - 1];
    const auto& cur = plan.charted[i];
    Complex next_start = piece_start(cur.local);
    if (!(prev.sheet == cur.sheet)) next_start = evaluate(s.rep(), prev.sheet.inverse() * cur.sheet).apply(next_start);
    plan.joint_residual = std::max(plan.joint_residual, dist(piece_end(prev.local), next_start));
  }
  plan.min_imaginary = path.local.empty() ? std::numeric_limits<double>::infinity() : halfplane_check(path.local, cfg);
  plan.verdict = embedded_check(s.rep(), path, cfg);
  if (cfg.verify) {
    if (!plan.verdict.embedded)
      fail(ErrorKind::EmbeddingCheckFailed, "rerouted arc: " + plan.verdict.to_string());
    if (!(plan.min_imaginary > 0.0))
      fail(ErrorKind::EmbeddingCheckFailed, "rerouted arc leaves the upper half-plane");
    if (plan.endpoint_residual > cfg.tau_alg)
      fail(ErrorKind::EmbeddingCheckFailed, "endpoint residual " + std::to_string(plan.endpoint_residual));
    if (plan.joint_residual > kJointTolerance)
      fail(ErrorKind::EmbeddingCheckFailed, "rerouted arc is broken: joint gap " + std::to_string(plan.joint_residual));
    plan.verified = true;
  }
  return plan;
}

std::string plan_report(const ReroutePlan& plan) {
  std::ostringstream os;
  os.precision(9);
  os << "steps " << plan.steps.size() << "\n";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& st = plan.steps[i];
    os << i << " " << to_string(st.kind);
    if (st.kind == StepKind::FollowBeta) {
      os << " segment " << static_cast<int>(st.from) << (st.omega == 1 ? " forward" : " backward");
    } else {
      os << " region " << st.region << " annulus " << st.annulus << " k " << st.record << " omega " << st.omega
         << " lift " << st.lift.to_string();
      if (st.kind == StepKind::FollowGamma) os << " from " << st.from << " to " << st.to << " dir " << st.direction;
    }
    os << " sheet " << st.sheet.to_string() << " pieces " << st.piece_count << "\n";
  }
  os << "end_word " << plan.end_word.to_string() << "\n";
  os << "endpoint_residual " << plan.endpoint_residual << "\n";
  os << "min_imaginary " << plan.min_imaginary << "\n";
  os << "embedded " << (plan.verdict.embedded ? "yes" : "no") << "\n";
  os << "result multicurve: " << plan.result.multicurve().to_string() << "\n";
  return os.str();
}

std::pair<GraftedStructure, DevelopedArc> debubble(const BranchedStructure& b) {
  return {b.primary().base, b.primary().arc};
}

namespace {

std::optional<std::size_t> find_presentation(const BranchedStructure& b, const GraftedStructure& base,
                                             const DevelopedArc& arc, const Config& cfg) {
  for (std::size_t i = 0; i < b.presentations().size(); ++i) {
    const auto& p = b.presentations()[i];
    if (same_structure(p.base, base, cfg) && same_arc(p.arc, arc, 1e3 * cfg.tau_alg)) return i;
  }
  return std::nullopt;
}

}  // namespace

std::pair<GraftedStructure, DevelopedArc> debubble(const BranchedStructure& b, const ReroutePlan& plan,
                                                   const Config& cfg) {
  if (find_presentation(b, plan.source, plan.source_arc, cfg)) return {plan.result, plan.rerouted};
  if (find_presentation(b, plan.result, plan.rerouted, cfg)) return {plan.source, plan.source_arc};
  fail(ErrorKind::NotABubble, "plan does not present this bubbling");
}

std::pair<GraftedStructure, DevelopedArc> debubble_to(const BranchedStructure& b, const GraftedStructure& target,
                                                      const Config& cfg) {
  for (const auto& p : b.presentations())
    if (same_structure(p.base, target, cfg)) return {p.base, p.arc};
  fail(ErrorKind::NotABubble, "no presentation over " + target.multicurve().to_string());
}

void certify(BranchedStructure& b, const ReroutePlan& plan, const Config& cfg) {
  bool has_source = find_presentation(b, plan.source, plan.source_arc, cfg).has_value();
  bool has_result = find_presentation(b, plan.result, plan.rerouted, cfg).has_value();
  if (has_source && has_result) return;
  if (has_source) {
    b.add_presentation({plan.result, plan.rerouted});
  } else if (has_result) {
    b.add_presentation({plan.source, plan.source_arc});
  } else {
    fail(ErrorKind::NotABubble, "plan does not present this bubbling");
  }
}

std::pair<GraftedStructure, DevelopedArc> degraft_full(const GraftedStructure& s, const DevelopedArc& arc,
                                                       const Config& cfg) {
  validate_bubbleable(s, arc, cfg);
  CrossingTable t = extract_crossings(s, arc, cfg);
  for (int r = 0; r < s.region_count(); ++r) {
    const AnnulusTable* a = t.find(r, 1);
    int n = a ? a->count() : 0;
    if (n != 1)
      fail(ErrorKind::NotFullCover, "region " + std::to_string(r) + " is crossed " + std::to_string(n) + " times");
  }
  ReroutePlan plan = reroute(s, arc, cfg);
  return {plan.result, plan.rerouted};
}

DevelopedArc synthesize_full_cover_arc(const GraftedStructure& s, const Config& cfg) {
  const int R = s.region_count();
  if (R == 0) fail(ErrorKind::ArcSynthesisFailed, "no grafting regions");
  std::mt19937 rng(0x5eedu);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::string last = "no attempt";
  for (int attempt = 0; attempt < std::max(1, cfg.max_perturbations); ++attempt) {
    std::vector<int> order(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) order[static_cast<std::size_t>(r)] = r;
    if (attempt > 0) std::shuffle(order.begin(), order.end(), rng);
    Complex cur(0.0, 1.0);
    std::vector<Complex> pts{cur};
    bool built = true;
    for (int r : order) {
      auto lifts = lifts_near(s, cur, 3.0, cfg);
      std::vector<std::pair<double, const LiftedAxis*>> cand;
      for (const auto& l : lifts)
        if (l.region == r) cand.emplace_back(std::abs(l.frame.offset(cur)), &l);
      if (cand.empty()) {
        built = false;
        break;
      }
      std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::size_t pick = 0;
      if (attempt > 0) pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(std::min<std::size_t>(3, cand.size())));
      pick = std::min(pick, cand.size() - 1);
      const AxisFrame& f = cand[pick].second->frame;
      auto [sc, uc] = f.to_fermi(cur);
      double side = uc >= 0.0 ? 1.0 : -1.0;
      double a = attempt == 0 ? 0.15 : 0.08 + 0.22 * unit(rng);
      double shift = attempt == 0 ? 0.0 : (unit(rng) - 0.5) * 0.5;
      Complex p = f.from_fermi(sc + shift, side * a);
      Complex q = f.from_fermi(sc + shift, -side * a);
      if (std::abs(uc) > a) pts.push_back(p);
      pts.push_back(q);
      cur = q;
    }
    if (!built) {
      last = "a region has no nearby lift";
      continue;
    }
    try {
      DevelopedArc arc = develop_polyline(s, pts, {}, cfg);
      validate_bubbleable(s, arc, cfg);
      CrossingTable t = extract_crossings(s, arc, cfg);
      bool ok = true;
      for (int r = 0; r < R && ok; ++r) {
        const AnnulusTable* tab = t.find(r, 1);
        ok = tab && tab->count() == 1;
      }
      if (ok) return arc;
      last = "some region is not crossed exactly once";
    } catch (const Error& e) {
      last = e.what();
    }
  }
  fail(ErrorKind::ArcSynthesisFailed, last);
}

int MoveSequence::bubblings() const {
  return static_cast<int>(std::count_if(moves.begin(), moves.end(), [](const Move& m) { return m.kind == Move::Kind::Bubbling; }));
}

int MoveSequence::debubblings() const { return static_cast<int>(moves.size()) - bubblings(); }

std::string MoveSequence::report() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto& m = moves[i];
    os << i + 1 << " " << (m.kind == Move::Kind::Bubbling ? "bubble" : "debubble") << " "
       << m.structure.multicurve().to_string() << " detours " << m.arc.detour_count();
    if (!m.note.empty()) os << " (" << m.note << ")";
    os << "\n";
  }
  os << "bubblings: " << bubblings() << ", debubblings: " << debubblings();
  return os.str();
}

namespace {

void push_bubble(MoveSequence& seq, const GraftedStructure& s, const DevelopedArc& arc, std::string note) {
  seq.moves.push_back({Move::Kind::Bubbling, s, arc, nullptr, std::move(note)});
}

void push_debubble(MoveSequence& seq, const GraftedStructure& s, const DevelopedArc& arc,
                   std::shared_ptr<const ReroutePlan> plan, std::string note) {
  seq.moves.push_back({Move::Kind::Debubbling, s, arc, std::move(plan), std::move(note)});
}

}  // namespace

MoveSequence plan_join(const GraftedStructure& sigma, const GraftedStructure& tau, const Config& cfg) {
  MoveSequence seq;
  if (same_structure(sigma, tau, cfg)) return seq;
  GraftedStructure mid = sigma;
  if (!sigma.is_uniformizing()) {
    DevelopedArc a = synthesize_full_cover_arc(sigma, cfg);
    BranchedStructure b = bubble(sigma, a, cfg);
    push_bubble(seq, sigma, a, "full cover of source");
    auto plan = std::make_shared<const ReroutePlan>(reroute(sigma, a, cfg));
    certify(b, *plan, cfg);
    auto [base, arc] = debubble(b, *plan, cfg);
    if (!base.is_uniformizing())
      fail(ErrorKind::EmbeddingCheckFailed, "degrafting left " + base.multicurve().to_string());
    push_debubble(seq, base, arc, plan, "degraft source");
    mid = base;
  }
  if (!tau.is_uniformizing()) {
    DevelopedArc c = synthesize_full_cover_arc(tau, cfg);
    auto plan = std::make_shared<const ReroutePlan>(reroute(tau, c, cfg));
    if (!plan->result.is_uniformizing())
      fail(ErrorKind::EmbeddingCheckFailed, "degrafting left " + plan->result.multicurve().to_string());
    BranchedStructure b = bubble(mid, plan->rerouted, cfg);
    push_bubble(seq, mid, plan->rerouted, "rerouted cover of target");
    certify(b, *plan, cfg);
    auto [base, arc] = debubble_to(b, tau, cfg);
    push_debubble(seq, base, arc, plan, "graft target");
  }
  return seq;
}

MoveSequence plan_join_branched(const BranchedStructure& sigma, const BranchedStructure& tau, const Config& cfg) {
  MoveSequence seq;
  for (const auto& p : tau.presentations())
    if (same_presentation(sigma.primary(), p, cfg)) return seq;
  auto [s0, a0] = debubble(sigma);
  push_debubble(seq, s0, a0, nullptr, "natural debubbling");
  MoveSequence mid = plan_join(s0, tau.primary().base, cfg);
  for (auto& m : mid.moves) seq.moves.push_back(std::move(m));
  push_bubble(seq, tau.primary().base, tau.primary().arc, "target bubbling");
  return seq;
}

namespace {

bool same_rep(const FuchsianRep& a, const FuchsianRep& b) { return &a == &b; }

}  // namespace

void replay_moves(const MoveSequence& seq, const BranchedStructure& start, const Config& cfg) {
  std::optional<BranchedStructure> cur = start;
  std::optional<GraftedStructure> plain;
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    const Move& m = seq.moves[i];
    std::string at = "move " + std::to_string(i + 1) + ": ";
    if (m.kind == Move::Kind::Bubbling) {
      if (!cur && plain && !same_structure(*plain, m.structure, cfg))
        fail(ErrorKind::NotABubble, at + "bubbling from a different structure");
      if (cur) fail(ErrorKind::NotABubble, at + "bubbling an already branched structure");
      cur = bubble(m.structure, m.arc, cfg);
      plain.reset();
    } else {
      if (!cur) fail(ErrorKind::NotABubble, at + "debubbling an unbranched structure");
      if (m.plan) {
        ReroutePlan again = reroute(m.plan->source, m.plan->source_arc, cfg);
        if (!same_structure(again.result, m.plan->result, cfg) || !same_arc(again.rerouted, m.plan->rerouted, 1e3 * cfg.tau_alg))
          fail(ErrorKind::EmbeddingCheckFailed, at + "reroute does not reproduce");
        certify(*cur, again, cfg);
      }
      auto [base, arc] = debubble_to(*cur, m.structure, cfg);
      if (!same_arc(arc, m.arc, 1e3 * cfg.tau_alg)) fail(ErrorKind::NotABubble, at + "arc mismatch");
      if (!same_rep(base.rep(), m.structure.rep()) && !same_structure(base, m.structure, cfg))
        fail(ErrorKind::NotABubble, at + "representation mismatch");
      plain = base;
      cur.reset();
    }
  }
}

void replay_moves(const MoveSequence& seq, const Config& cfg) {
  if (seq.moves.empty()) return;
  const Move& first = seq.moves.front();
  if (first.kind == Move::Kind::Debubbling)
    fail(ErrorKind::InvalidArgument, "sequence without a start must begin with a bubbling");
  std::optional<GraftedStructure> plain = first.structure;
  std::optional<BranchedStructure> cur;
  MoveSequence rest = seq;
  BranchedStructure b = bubble(first.structure, first.arc, cfg);
  rest.moves.erase(rest.moves.begin());
  replay_moves(rest, b, cfg);
}

}  // namespace cp1
