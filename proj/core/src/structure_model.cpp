#include "cp1/structure_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cp1/error.hpp"

namespace cp1 {

int WeightedMulticurve::total_weight() const {
  int t = 0;
  for (const auto& c : components) t += c.weight;
  return t;
}

int WeightedMulticurve::max_weight() const {
  int m = 0;
  for (const auto& c : components) m = std::max(m, c.weight);
  return m;
}

std::string WeightedMulticurve::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) s += ", ";
    s += components[i].word.to_string() + ":" + std::to_string(components[i].weight);
  }
  return s + "]";
}

namespace {

const char* relation_error_context(int i, int j) { return i == j ? "self" : "pair"; }

}  // namespace

GraftedStructure build_structure(RepPtr rep, WeightedMulticurve multicurve, const Config& cfg) {
  if (!rep) fail(ErrorKind::InvalidArgument, "null representation");
  GraftedStructure s;
  s.rep_ = rep;
  const int genus = rep->genus();
  for (const auto& c : multicurve.components) {
    if (c.weight < 1) fail(ErrorKind::InvalidArgument, "weight must be >= 1 for " + c.word.to_string());
    for (int l : c.word.letters())
      if (std::abs(l) > 2 * genus) fail(ErrorKind::BadIndex, "word " + c.word.to_string());
    RegionGeometry g;
    g.word = c.word;
    g.weight = c.weight;
    g.holonomy = evaluate(*rep, c.word);
    Classification k = classify(g.holonomy, cfg.tau_alg);
    if (k.kind != MobiusKind::Hyperbolic)
      fail(ErrorKind::NotHyperbolicHolonomy, c.word.to_string() + " is not hyperbolic");
    g.length = k.translation_length;
    Axis ax = axis_of(g.holonomy, cfg.tau_alg);
    g.base_frame = AxisFrame(ax.repelling, ax.attracting).recentered(Complex(0.0, 1.0));
    s.regions_.push_back(g);
  }
  s.multicurve_ = std::move(multicurve);
  s.lifts_ = std::make_shared<LiftCache>();
  if (s.regions_.empty()) return s;

  int radius = effective_radius(genus, cfg.disjointness_radius, cfg);
  auto ball = cached_ball(*rep, radius, cfg);
  const std::size_t n = s.regions_.size();
  std::vector<HPoint> rep_pts(n), att_pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep_pts[i] = s.regions_[i].base_frame.repelling();
    att_pts[i] = s.regions_[i].base_frame.attracting();
  }
  for (int pass = 0; pass < 2; ++pass)
  for (const auto& el : *ball) {
    for (std::size_t i = 0; i < n; ++i) {
      HPoint p = el.map.apply(rep_pts[i]);
      HPoint q = el.map.apply(att_pts[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if ((pass == 0) != (i == j)) continue;
        GeodesicRelation rel = relate_geodesics(p, q, rep_pts[j], att_pts[j]);
        if (rel == GeodesicRelation::Disjoint) continue;
        std::string witness = std::string(relation_error_context(static_cast<int>(i), static_cast<int>(j))) +
                              " " + s.regions_[i].word.to_string() + " / " + s.regions_[j].word.to_string() +
                              " via " + el.word.to_string();
        if (rel == GeodesicRelation::Crossing || rel == GeodesicRelation::SharedEndpoint) {
          if (i == j) fail(ErrorKind::NotSimple, "translate crosses axis: " + witness);
          fail(ErrorKind::NotDisjoint, "axes cross: " + witness);
        }
        if (rel == GeodesicRelation::Same) {
          if (i != j) fail(ErrorKind::NotDisjoint, "parallel classes (use a weight): " + witness);
          if (!el.word.is_identity()) {
            Classification k = classify(el.map, cfg.tau_alg);
            if (k.kind == MobiusKind::Hyperbolic && k.translation_length < s.regions_[i].length * (1.0 - 1e-9))
              fail(ErrorKind::NotSimple, "non-primitive class: " + witness);
          }
        }
      }
    }
  }
  return s;
}

GraftedStructure uniformizing_structure(RepPtr rep) { return build_structure(std::move(rep), {}); }

GraftingRegionInfo region_info(const GraftedStructure& s, int component) {
  if (component < 0 || component >= s.region_count()) fail(ErrorKind::BadIndex, "region index");
  const auto& r = s.region(component);
  GraftingRegionInfo info;
  info.component = component;
  info.weight = r.weight;
  info.axis = r.base_frame.geodesic();
  info.first_annulus = 1;
  info.last_annulus = r.weight;
  for (int h = 1; h <= r.weight; ++h)
    info.boundary_labels.emplace_back("l_L^" + std::to_string(h), "l_R^" + std::to_string(h));
  return info;
}

namespace {

int rank_mod2(std::vector<std::vector<int>> rows) {
  int rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != static_cast<std::size_t>(rank) && rows[r][c])
        for (std::size_t k = 0; k < cols; ++k) rows[r][k] ^= rows[static_cast<std::size_t>(rank)][k];
    ++rank;
  }
  return rank;
}

}  // namespace

DecompositionSummary decomposition_summary(const GraftedStructure& s) {
  DecompositionSummary d;
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < s.region_count(); ++i) {
    const auto& r = s.region(i);
    RegionDecomposition rd;
    rd.component = i;
    rd.weight = r.weight;
    rd.negative_annuli = r.weight;
    rd.positive_annuli = r.weight - 1;
    rd.real_curves = 2 * r.weight;
    d.regions.push_back(rd);
    d.negative_components += rd.negative_annuli;
    d.real_curves += rd.real_curves;
    d.positive_components += rd.positive_annuli;
    classes.push_back(homology_mod2(r.word, s.rep().genus()));
  }
  // complement of n disjoint simple curves has 1 + n - rank pieces
  d.positive_components += 1 + s.region_count() - rank_mod2(classes);
  return d;
}

bool same_class(const FuchsianRep& rep, const GroupWord& w1, const GroupWord& w2, const Config& cfg) {
  MobiusMap m1 = evaluate(rep, w1), m2 = evaluate(rep, w2);
  double t1 = std::abs(m1.trace()), t2 = std::abs(m2.trace());
  if (std::abs(t1 - t2) > 1e-9 * std::max(1.0, t1)) return false;
  if (classify(m1, cfg.tau_alg).kind != MobiusKind::Hyperbolic) return m1.approx_equal(m2, cfg.tau_alg);
  Axis a1 = axis_of(m1), a2 = axis_of(m2);
  int radius = effective_radius(rep.genus(), cfg.disjointness_radius, cfg);
  auto ball = cached_ball(rep, radius, cfg);
  for (const auto& el : *ball) {
    HPoint p = el.map.apply(a1.repelling), q = el.map.apply(a1.attracting);
    if (relate_geodesics(p, q, a2.repelling, a2.attracting) == GeodesicRelation::Same) return true;
  }
  return false;
}

bool same_structure(const GraftedStructure& a, const GraftedStructure& b, const Config& cfg) {
  if (!(a.rep() == b.rep())) return false;
  if (a.region_count() != b.region_count()) return false;
  std::vector<bool> used(static_cast<std::size_t>(b.region_count()), false);
  for (const auto& ra : a.regions()) {
    bool found = false;
    for (int j = 0; j < b.region_count(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const auto& rb = b.region(j);
      if (rb.weight != ra.weight) continue;
      if (same_class(a.rep(), ra.word, rb.word, cfg)) {
        used[static_cast<std::size_t>(j)] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool same_lift(const LiftedAxis& a, const LiftedAxis& b) {
  return a.region == b.region &&
         relate_geodesics(a.repelling, a.attracting, b.repelling, b.attracting) == GeodesicRelation::Same;
}

namespace {

std::vector<LiftedAxis> distinct_lifts(const GraftedStructure& s, int r, const Config& cfg) {
  std::vector<LiftedAxis> out;
  auto ball = cached_ball(s.rep(), r, cfg);
  using Key = std::pair<long long, long long>;
  const double grid = 1e-7;
  for (int reg = 0; reg < s.region_count(); ++reg) {
    const auto& g = s.region(reg);
    HPoint rep0 = g.base_frame.repelling(), att0 = g.base_frame.attracting();
    std::map<Key, std::vector<std::size_t>> seen;
    for (const auto& el : *ball) {
      HPoint p = el.map.apply(rep0), q = el.map.apply(att0);
      double a1 = ideal_angle(p), a2 = ideal_angle(q);
      if (a1 > a2) std::swap(a1, a2);
      long long k1 = std::llround(a1 / grid), k2 = std::llround(a2 / grid);
      bool dup = false;
      for (long long d1 = -1; d1 <= 1 && !dup; ++d1)
        for (long long d2 = -1; d2 <= 1 && !dup; ++d2) {
          auto it = seen.find({k1 + d1, k2 + d2});
          if (it == seen.end()) continue;
          for (std::size_t idx : it->second)
            if (relate_geodesics(p, q, out[idx].repelling, out[idx].attracting) == GeodesicRelation::Same) {
              dup = true;
              break;
            }
        }
      if (dup) continue;
      AxisFrame f = g.base_frame.transformed(el.map);
      LiftedAxis la{reg, el.word, el.map, f, p, q, g.weight};
      std::size_t idx = out.size();
      out.push_back(la);
      seen[{k1, k2}].push_back(idx);
    }
  }
  return out;
}

}  // namespace

struct LiftCache {
  std::mutex mutex;
  std::map<std::pair<int, std::size_t>, std::shared_ptr<const std::vector<LiftedAxis>>> by_radius;

  static std::shared_ptr<const std::vector<LiftedAxis>> get(const GraftedStructure& s, int r, const Config& cfg) {
    if (!s.lifts_) return std::make_shared<const std::vector<LiftedAxis>>(distinct_lifts(s, r, cfg));
    std::lock_guard<std::mutex> lock(s.lifts_->mutex);
    auto& slot = s.lifts_->by_radius[{r, cfg.ball_cap}];
    if (!slot) slot = std::make_shared<const std::vector<LiftedAxis>>(distinct_lifts(s, r, cfg));
    return slot;
  }
};

std::vector<LiftedAxis> lifts_near(const GraftedStructure& s, Complex center, double radius, const Config& cfg) {
  if (s.is_uniformizing()) return {};
  int r = effective_radius(s.rep().genus(), cfg.lift_radius, cfg);
  auto all = LiftCache::get(s, r, cfg);
  std::vector<LiftedAxis> near;
  for (const auto& la : *all)
    if (std::abs(la.frame.offset(center)) <= radius) near.push_back(la);
  return near;
}

double min_translate_separation(const std::vector<LiftedAxis>& t) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (same_lift(t[i], t[j])) continue;
      best = std::min(best, geodesic_distance(t[i].repelling, t[i].attracting, t[j].repelling, t[j].attracting));
    }
  return best;
}

double choose_epsilon(const GraftedStructure& s, const EpsilonContext& ctx, const Config& cfg) {
  int m_max = 0;
  for (const auto& t : ctx.translates) m_max = std::max(m_max, t.weight);
  if (m_max == 0) m_max = std::max(1, s.multicurve().max_weight());
  double delta = min_translate_separation(ctx.translates);
  if (delta < 4.0 * cfg.tau_sep)
    fail(ErrorKind::NoValidEpsilon, "translate separation " + std::to_string(delta) + " below 4 tau_sep");
  double eps = std::min({cfg.epsilon_cap, delta / (8.0 * m_max), ctx.clearance_bound});
  if (!(eps > 4.0 * cfg.tau_sep))
    fail(ErrorKind::NoValidEpsilon, "admissible epsilon " + std::to_string(eps) + " too small");
  return eps;
}

double band_center(int weight, int annulus, double eps) {
  return static_cast<double>(weight - 2 * annulus + 1) * eps;
}

const HypercycleSeg& CollarSystem::curve(int j) const {
  auto it = std::find(indices.begin(), indices.end(), j);
  if (it == indices.end()) fail(ErrorKind::BadIndex, "collar curve index " + std::to_string(j));
  return curves[static_cast<std::size_t>(it - indices.begin())];
}

CollarSystem collar_system(const GraftedStructure& s, int region, double eps,
                           const std::vector<LiftedAxis>& translates, const Config& cfg) {
  if (region < 0 || region >= s.region_count()) fail(ErrorKind::BadIndex, "region index");
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
  const auto& r = s.region(region);
  CollarSystem c;
  c.region = region;
  c.weight = r.weight;
  c.epsilon = eps;
  c.length = r.length;
  c.base_frame = r.base_frame;
  for (int j = -r.weight; j <= r.weight; ++j) {
    c.indices.push_back(j);
    c.curves.emplace_back(r.base_frame, -j * eps, 0.0, r.length);
  }
  for (int h = 1; h <= r.weight; ++h) {
    double ctr = band_center(r.weight, h, eps);
    c.bands.push_back({h, ctr - eps, ctr + eps, ctr});
  }
  for (std::size_t i = 0; i < translates.size(); ++i)
    for (std::size_t j = i + 1; j < translates.size(); ++j) {
      const auto& a = translates[i];
      const auto& b = translates[j];
      if (same_lift(a, b)) continue;
      double d = geodesic_distance(a.repelling, a.attracting, b.repelling, b.attracting);
      if (d < (a.weight + b.weight) * eps + cfg.tau_sep)
        fail(ErrorKind::CollarOverlap, "collars of " + a.word.to_string() + " and " + b.word.to_string() +
                                           " overlap at epsilon " + std::to_string(eps));
    }
  return c;
}

}  // namespace cp1
