#include "cp1/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "cp1/error.hpp"
#include "cp1/random_scene.hpp"
#include "cp1/render.hpp"
#include "cp1/surgery.hpp"

namespace cp1 {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

// Duplicate auxiliary steps in a plan, counted from the step list alone.
bool steps_unique(const ReroutePlan& p) {
  std::set<std::tuple<int, int, int, int, int>> seen;
  for (const auto& st : p.steps) {
    std::tuple<int, int, int, int, int> key;
    switch (st.kind) {
      case StepKind::FollowBeta: key = {0, static_cast<int>(st.from), 0, 0, 0}; break;
      case StepKind::FollowZeta: key = {1, st.unit, 0, 0, 0}; break;
      case StepKind::FollowXi: key = {2, st.unit, 0, 0, 0}; break;
      case StepKind::OffAxisHop: key = {3, st.unit, 0, 0, 0}; break;
      case StepKind::FollowGamma:
        key = {4, st.region * 1000 + st.annulus, st.record, st.direction, static_cast<int>(std::llround(st.from * 1e6))};
        break;
    }
    if (!seen.insert(key).second) return false;
  }
  return true;
}

void check_plan(Outcome& o, const ReroutePlan& p, const DevelopedArc& arc, const Config& cfg, const std::string& tag) {
  o.require(p.verdict.embedded, tag + ": rerouted arc " + p.verdict.to_string());
  o.require(p.min_imaginary > 0.0, tag + ": min Im " + fmt(p.min_imaginary));
  o.require(p.endpoint_residual <= cfg.tau_alg, tag + ": endpoint residual " + fmt(p.endpoint_residual));
  o.require(p.joint_residual <= 1e-7, tag + ": joint residual " + fmt(p.joint_residual));
  o.require(steps_unique(p), tag + ": an auxiliary step is used twice");
  o.require(dist(p.rerouted.start(), arc.start()) <= 1e-9, tag + ": start moved");
}

std::vector<LoadedScene> random_scene_set(std::uint64_t seed, int n, const Config& cfg) {
  SceneRng rng(seed);
  std::vector<LoadedScene> out;
  for (int i = 0; i < n; ++i) out.push_back(random_scene(rng, {}, cfg));
  return out;
}

CriterionResult fixture_criterion(int id, const std::string& name, const Scene& sc, double budget, const Config& cfg) {
  CriterionResult r{id, name, false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  try {
    LoadedScene ls = load_scene(sc, cfg);
    ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
    r.seconds = seconds_since(t0);
    o.require(p.result.multicurve().empty(), "result multicurve " + p.result.multicurve().to_string());
    check_plan(o, p, ls.arc, ls.config, "fixture");
    o.require(r.seconds < budget, "runtime " + fmt(r.seconds) + " s over " + fmt(budget) + " s");
    if (o.pass)
      o.detail = "result [], min Im " + fmt(p.min_imaginary) + ", residual " + fmt(p.endpoint_residual) + ", " +
                 std::to_string(p.steps.size()) + " steps";
  } catch (const Error& e) {
    o.require(false, e.what());
  }
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

CriterionResult random_reroute_criterion(const std::vector<LoadedScene>& scenes) {
  CriterionResult r{3, "random reroute suite", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  int multi = 0, crossings = 0;
  for (std::size_t i = 0; i < scenes.size() && o.pass; ++i) {
    const auto& ls = scenes[i];
    std::string tag = "scene " + std::to_string(i);
    try {
      ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
      check_plan(o, p, ls.arc, ls.config, tag);
      for (int c : crossings_per_region(ls.structure, ls.arc)) {
        crossings += c;
        if (c > 1) ++multi;
      }
    } catch (const Error& e) {
      o.require(false, tag + ": " + e.what() + "\n" + format_scene(ls.scene));
    }
  }
  if (o.pass)
    o.detail = std::to_string(scenes.size()) + " scenes, " + std::to_string(crossings) + " crossings, " +
               std::to_string(multi) + " regions crossed more than once";
  r.seconds = seconds_since(t0);
  r.pass = o.pass && scenes.size() >= 200;
  r.detail = o.detail;
  return r;
}

LoadedScene full_cover_structure(SceneRng& rng, int genus, const Config& cfg) {
  return random_structure(rng, genus, 2, 2, false, cfg);
}

CriterionResult move_count_criterion(const AcceptanceOptions& opt, const Config& cfg) {
  CriterionResult r{4, "join move counts", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  SceneRng rng(opt.seed ^ 0x4a4f494eULL);
  int max_b = 0, max_d = 0;
  for (int i = 0; i < opt.unbranched_pairs && o.pass; ++i) {
    int genus = 2 + i % 2;
    std::string tag = "pair " + std::to_string(i);
    try {
      LoadedScene a = full_cover_structure(rng, genus, cfg);
      LoadedScene b = full_cover_structure(rng, genus, cfg);
      MoveSequence seq = plan_join(a.structure, b.structure, cfg);
      o.require(seq.bubblings() <= 2 && seq.debubblings() <= 2, tag + ": " + seq.report());
      replay_moves(seq, cfg);
      if (!seq.moves.empty()) {
        o.require(same_structure(seq.moves.back().structure, b.structure, cfg), tag + ": join does not reach target");
        for (const auto& m : seq.moves) o.require(m.structure.rep() == a.structure.rep(), tag + ": holonomy changed");
      }
      max_b = std::max(max_b, seq.bubblings());
      max_d = std::max(max_d, seq.debubblings());
    } catch (const Error& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  int max_bb = 0, max_bd = 0;
  for (int i = 0; i < opt.branched_pairs && o.pass; ++i) {
    int genus = 2 + i % 2;
    std::string tag = "branched pair " + std::to_string(i);
    try {
      LoadedScene a = full_cover_structure(rng, genus, cfg);
      LoadedScene b = full_cover_structure(rng, genus, cfg);
      RandomSceneOptions ro;
      ro.min_crossings = 0;
      auto bubbled = [&](const LoadedScene& base) {
        for (int t = 0; t < 200; ++t) {
          auto pts = random_polyline(base.structure, rng, ro, cfg);
          try {
            DevelopedArc arc = develop_polyline(base.structure, pts, {}, cfg);
            return bubble(base.structure, arc, cfg);
          } catch (const Error&) {
          }
        }
        fail(ErrorKind::InvalidArgument, "no bubbleable arc");
      };
      BranchedStructure sa = bubbled(a), sb = bubbled(b);
      MoveSequence seq = plan_join_branched(sa, sb, cfg);
      o.require(seq.bubblings() <= 3 && seq.debubblings() <= 3, tag + ": " + seq.report());
      replay_moves(seq, sa, cfg);
      max_bb = std::max(max_bb, seq.bubblings());
      max_bd = std::max(max_bd, seq.debubblings());
    } catch (const Error& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  if (o.pass)
    o.detail = std::to_string(opt.unbranched_pairs) + " pairs, max " + std::to_string(max_b) + "+" +
               std::to_string(max_d) + "; " + std::to_string(opt.branched_pairs) + " branched pairs, max " +
               std::to_string(max_bb) + "+" + std::to_string(max_bd) + "; all moves replayed";
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

CriterionResult real_curve_criterion(const AcceptanceOptions& opt, const Config& cfg) {
  CriterionResult r{5, "real curve counts", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  SceneRng rng(opt.seed ^ 0x5245414cULL);
  int checked = 0;
  for (int i = 0; i < 100 && o.pass; ++i) {
    int genus = 2 + i % 2;
    try {
      LoadedScene ls = random_structure(rng, genus, 3, 3, true, cfg);
      const auto& s = ls.structure;
      auto d = decomposition_summary(s);
      o.require(d.real_curves == 2 * s.multicurve().total_weight(),
                s.multicurve().to_string() + ": " + std::to_string(d.real_curves) + " real curves");
      const auto& c = s.multicurve().components.front();
      int m = 1 + i % 3;
      GraftedStructure g = graft(s, c.word, m, cfg);
      o.require(decomposition_summary(g).real_curves == d.real_curves + 2 * m,
                "grafting " + c.word.to_string() + " " + std::to_string(m) + " times");
      ++checked;
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " structures, grafting adds 2m";
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

CriterionResult table_criterion(const std::vector<LoadedScene>& scenes) {
  CriterionResult r{6, "crossing table invariants", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  int tables = 0;
  for (std::size_t i = 0; i < scenes.size() && o.pass; ++i) {
    const auto& ls = scenes[i];
    std::string tag = "scene " + std::to_string(i);
    try {
      CrossingTable t = extract_crossings(ls.structure, ls.arc, ls.config);
      std::map<int, int> count;
      for (const auto& tab : t.tables) {
        ++tables;
        int n = tab.count();
        o.require(!tab.sigma.empty() && tab.sigma.front() == 1, tag + ": sigma(1) != 1");
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l)
            o.require(tab.coherence_matrix[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)] ==
                          tab.beta(k).coherence * tab.beta(l).coherence,
                      tag + ": coherence matrix is not a product");
        auto [it, fresh] = count.emplace(tab.region, n);
        o.require(fresh || it->second == n, tag + ": crossing counts differ across annuli");
        for (int k = 1; k <= n; ++k)
          for (auto obj : {CrossingObject::In, CrossingObject::Out, CrossingObject::AnchorIn, CrossingObject::AnchorOut,
                           CrossingObject::Zeta, CrossingObject::Xi})
            for (int sg : {1, -1}) {
              CrossingDatum x{obj, k};
              o.require(z2_act(sg, z2_act(sg, x)) == x, tag + ": z2 action is not an involution");
            }
      }
      for (int reg = 0; reg < ls.structure.region_count(); ++reg) {
        int w = ls.structure.region(reg).weight;
        int have = 0;
        for (int h = 1; h <= w; ++h) have += t.find(reg, h) ? 1 : 0;
        o.require(have == 0 || have == w, tag + ": region with a missing annulus table");
      }
    } catch (const Error& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  if (o.pass) o.detail = std::to_string(tables) + " tables over " + std::to_string(scenes.size()) + " scenes";
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

MobiusMap random_psl2r(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), th(0.0, 2.0 * std::numbers::pi);
  return MobiusMap::rotation_about_i(th(rng)) * MobiusMap::dilation(std::exp(u(rng))) * MobiusMap::translation(u(rng));
}

double frobenius(const MobiusMap& m) {
  return std::sqrt(m.a() * m.a() + m.b() * m.b() + m.c() * m.c() + m.d() * m.d());
}

MobiusMap unit_det(const MobiusMap& m) {
  double k = 1.0 / std::sqrt(m.det());
  return MobiusMap::from_entries(k * m.a(), k * m.b(), k * m.c(), k * m.d());
}

Complex random_h2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-2.0, 2.0), ly(-1.5, 1.5);
  return {x(rng), std::exp(ly(rng))};
}

CriterionResult kernel_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{7, "kernel suites", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  std::mt19937_64 rng(opt.seed ^ 0x4b45524eULL);
  double worst_trace = 0.0, worst_dist = 0.0, worst_rel = 0.0;
  int kind_changes = 0;
  auto rep = canonical_rep(2);
  std::uniform_int_distribution<int> letter(1, 4), len(1, 4), sign(0, 1);
  for (int c = 0; c < opt.kernel_cases; ++c) {
    std::vector<int> w;
    for (int k = len(rng); k > 0; --k) w.push_back(sign(rng) ? letter(rng) : -letter(rng));
    MobiusMap g = evaluate(rep, GroupWord(w));
    MobiusMap h = random_psl2r(rng);
    MobiusMap conj = h * g * h.inverse();
    double t1 = std::abs(g.trace()), t2 = std::abs(conj.trace());
    double kappa = frobenius(g) * frobenius(h) * frobenius(h);
    worst_trace = std::max(worst_trace, std::abs(t1 - t2) / kappa);
    Classification k1 = classify(unit_det(g)), k2 = classify(unit_det(conj));
    if (k1.kind != k2.kind) ++kind_changes;
  }
  for (int c = 0; c < opt.kernel_cases; ++c) {
    MobiusMap m = random_psl2r(rng);
    Complex z = random_h2(rng), w = random_h2(rng);
    double d0 = dist(z, w), d1 = dist(m.apply(z), m.apply(w));
    worst_dist = std::max(worst_dist, std::abs(d0 - d1) / std::max(1.0, d0));
  }
  for (int genus : {2, 3, 4}) {
    auto base = canonical_rep(genus);
    std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi), dil(-0.25, 0.25);
    for (int c = 0; c < opt.kernel_cases; ++c) {
      MobiusMap h = MobiusMap::rotation_about_i(th(rng)) * MobiusMap::dilation(dil(rng));
      std::vector<MobiusMap> gens;
      for (const auto& g : base.generators()) gens.push_back(h * g * h.inverse());
      worst_rel = std::max(worst_rel, relator_residual(genus, gens));
    }
  }
  o.require(kind_changes == 0, std::to_string(kind_changes) + " conjugations change the classification");
  o.require(worst_trace <= 1e-9, "conjugation changes trace by " + fmt(worst_trace) + " relative to conditioning");
  o.require(worst_dist <= 1e-9, "isometry changes distance by " + fmt(worst_dist));
  o.require(worst_rel <= 1e-9, "relator residual " + fmt(worst_rel));
  if (o.pass)
    o.detail = std::to_string(opt.kernel_cases) + " cases each: trace " + fmt(worst_trace) + ", dist " +
               fmt(worst_dist) + ", relator " + fmt(worst_rel);
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

CriterionResult roundtrip_criterion(const std::vector<LoadedScene>& scenes, const AcceptanceOptions& opt,
                                    const Config& cfg) {
  CriterionResult r{8, "round trips", false, "", 0.0};
  auto t0 = Clock::now();
  Outcome o;
  int n = std::min<int>(opt.roundtrip_scenes, static_cast<int>(scenes.size()));
  for (int i = 0; i < n && o.pass; ++i) {
    const auto& ls = scenes[static_cast<std::size_t>(i)];
    try {
      BranchedStructure b = bubble(ls.structure, ls.arc, ls.config);
      auto [s, arc] = debubble(b);
      o.require(same_structure(s, ls.structure, ls.config) && same_arc(arc, ls.arc, 0.0),
                "scene " + std::to_string(i) + ": debubble(bubble) differs");
    } catch (const Error& e) {
      o.require(false, "scene " + std::to_string(i) + ": " + e.what());
    }
  }
  try {
    LoadedScene ls = load_scene(degrafting_scene(), cfg);
    ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
    RenderScene rs{&ls.structure, &ls.arc, &p};
    for (RenderModel m : {RenderModel::HalfPlane, RenderModel::Disk}) {
      std::string first = render_svg(rs, {}, m, ls.config);
      for (int k = 1; k < opt.render_runs; ++k)
        o.require(render_svg(rs, {}, m, ls.config) == first, "render output differs between runs");
    }
  } catch (const Error& e) {
    o.require(false, std::string("render: ") + e.what());
  }
  if (o.pass)
    o.detail = std::to_string(n) + " bubble/debubble round trips, " + std::to_string(opt.render_runs) +
               " identical renders per model";
  r.seconds = seconds_since(t0);
  r.pass = o.pass;
  r.detail = o.detail;
  return r;
}

CriterionResult dispatch(int id, const AcceptanceOptions& opt, const Config& cfg,
                         const std::function<const std::vector<LoadedScene>&()>& scenes) {
  switch (id) {
    case 1: return fixture_criterion(1, "degrafting lemma", degrafting_scene(), 1.0, cfg);
    case 2: return fixture_criterion(2, "multi-degrafting", two_region_scene(), 5.0, cfg);
    case 3: return random_reroute_criterion(scenes());
    case 4: return move_count_criterion(opt, cfg);
    case 5: return real_curve_criterion(opt, cfg);
    case 6: return table_criterion(scenes());
    case 7: return kernel_criterion(opt);
    case 8: return roundtrip_criterion(scenes(), opt, cfg);
    default: break;
  }
  fail(ErrorKind::BadIndex, "no acceptance criterion " + std::to_string(id));
}

CriterionResult guarded(int id, const AcceptanceOptions& opt, const Config& cfg,
                        const std::function<const std::vector<LoadedScene>&()>& scenes) {
  auto t0 = Clock::now();
  try {
    return dispatch(id, opt, cfg, scenes);
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, e.what(), seconds_since(t0)};
  }
}

}  // namespace

Scene degrafting_scene() {
  return parse_scene(
      "cp1-scene v1\n"
      "genus 2\n"
      "curve a1 1\n"
      "point -1.990269 1.191437\n"
      "point -0.580148 1.200131\n");
}

Scene two_region_scene() {
  return parse_scene(
      "cp1-scene v1\n"
      "genus 2\n"
      "curve a1 1\n"
      "curve a2 2\n"
      "point 0 1\n"
      "point -1.008621 1.414187\n"
      "point -1.419854 1.350453\n"
      "point -2.828555 0.403027\n"
      "point -2.855871 0.301648\n");
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt, const Config& cfg) {
  std::vector<LoadedScene> cache;
  bool made = false;
  auto scenes = [&]() -> const std::vector<LoadedScene>& {
    if (!made) {
      cache = random_scene_set(opt.seed, std::max(opt.random_scenes, opt.roundtrip_scenes), cfg);
      made = true;
    }
    return cache;
  };
  return guarded(id, opt, cfg, scenes);
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const Config& cfg) {
  std::vector<LoadedScene> cache;
  bool made = false;
  auto scenes = [&]() -> const std::vector<LoadedScene>& {
    if (!made) {
      cache = random_scene_set(opt.seed, std::max(opt.random_scenes, opt.roundtrip_scenes), cfg);
      made = true;
    }
    return cache;
  };
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(guarded(id, opt, cfg, scenes));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << " (" << fmt(r.seconds) << " s)";
  return os.str();
}

}  // namespace cp1
