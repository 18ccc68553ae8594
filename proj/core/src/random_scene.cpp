#include "cp1/random_scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

int uniform_int(SceneRng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(SceneRng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

std::vector<std::string> random_curve_family(int genus, SceneRng& rng, int max_regions, bool allow_separating) {
  std::vector<std::string> pool;
  for (int i = 1; i <= genus; ++i) {
    std::string n = std::to_string(i);
    switch (uniform_int(rng, 0, 2)) {
      case 1: pool.push_back("a" + n); break;
      case 2: pool.push_back("b" + n); break;
      default: break;
    }
    if (allow_separating && i < genus && uniform_int(rng, 0, 3) == 0)
      pool.push_back("a" + n + " b" + n + " A" + n + " B" + n);
  }
  if (pool.empty()) pool.push_back("a" + std::to_string(uniform_int(rng, 1, genus)));
  std::shuffle(pool.begin(), pool.end(), rng);
  if (static_cast<int>(pool.size()) > max_regions) pool.resize(static_cast<std::size_t>(max_regions));
  return pool;
}

std::vector<SceneCurve> random_multicurve(int genus, SceneRng& rng, int max_regions, int max_weight,
                                          bool allow_separating) {
  std::vector<SceneCurve> out;
  for (auto& w : random_curve_family(genus, rng, max_regions, allow_separating))
    out.push_back({w, uniform_int(rng, 1, max_weight)});
  return out;
}

Complex random_point(SceneRng& rng, double radius) {
  double rmax = std::tanh(radius / 2.0);
  double r = rmax * std::sqrt(uniform(rng, 0.0, 1.0));
  double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  Complex w = std::polar(r, th);
  const Complex i(0.0, 1.0);
  return i * (1.0 + w) / (1.0 - w);
}

std::vector<int> crossings_per_region(const GraftedStructure& s, const DevelopedArc& arc) {
  std::vector<int> n(static_cast<std::size_t>(s.region_count()), 0);
  for (const auto& p : arc.pieces)
    if (const auto* d = std::get_if<Detour>(&p))
      if (d->annulus == 1) ++n[static_cast<std::size_t>(d->region)];
  return n;
}

LoadedScene random_structure(SceneRng& rng, int genus, int max_regions, int max_weight, bool allow_separating,
                             const Config& cfg) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Scene sc;
    sc.genus = genus;
    sc.curves = random_multicurve(genus, rng, max_regions, max_weight, allow_separating);
    try {
      return load_scene(sc, cfg);
    } catch (const Error&) {
    }
  }
  fail(ErrorKind::InvalidArgument, "no valid random multicurve");
}

std::vector<Complex> random_polyline(const GraftedStructure& s, SceneRng& rng, const RandomSceneOptions& opt,
                                     const Config& cfg) {
  std::vector<Complex> pts;
  auto lifts = lifts_near(s, Complex(0.0, 1.0), opt.point_radius, cfg);
  int np = uniform_int(rng, opt.min_points, opt.max_points);
  if (lifts.empty() || uniform_int(rng, 0, 4) == 0) {
    for (int j = 0; j < np; ++j) pts.push_back(random_point(rng, opt.point_radius));
    return pts;
  }
  // pairs of points straddling nearby lifts, so that most arcs cross something
  while (static_cast<int>(pts.size()) < np) {
    const auto& l = lifts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(lifts.size()) - 1))];
    double s0 = l.frame.param(Complex(0.0, 1.0)) + uniform(rng, -1.0, 1.0);
    double side = uniform_int(rng, 0, 1) ? 1.0 : -1.0;
    pts.push_back(l.frame.from_fermi(s0, side * uniform(rng, 0.1, 0.8)));
    if (static_cast<int>(pts.size()) < np)
      pts.push_back(l.frame.from_fermi(s0 + uniform(rng, -0.3, 0.3), -side * uniform(rng, 0.1, 0.8)));
  }
  return pts;
}

LoadedScene random_scene(SceneRng& rng, const RandomSceneOptions& opt, const Config& cfg) {
  constexpr int kArcsPerStructure = 12;
  int tries = 0;
  while (tries < opt.max_tries) {
    int genus = uniform_int(rng, opt.genus_min, opt.genus_max);
    LoadedScene base;
    try {
      base = random_structure(rng, genus, opt.max_regions, opt.max_weight, opt.allow_separating, cfg);
    } catch (const Error&) {
      ++tries;
      continue;
    }
    for (int k = 0; k < kArcsPerStructure && tries < opt.max_tries; ++k, ++tries) {
      LoadedScene ls = base;
      ls.scene.points = random_polyline(ls.structure, rng, opt, cfg);
      try {
        ls.arc = develop_polyline(ls.structure, ls.scene.points, {}, ls.config);
        auto n = crossings_per_region(ls.structure, ls.arc);
        int total = 0;
        bool ok = true;
        for (int c : n) {
          total += c;
          ok = ok && c <= opt.max_crossings_per_region;
        }
        if (!ok || total < opt.min_crossings) continue;
        validate_bubbleable(ls.structure, ls.arc, ls.config);
        extract_crossings(ls.structure, ls.arc, ls.config);
        return ls;
      } catch (const Error&) {
      }
    }
  }
  fail(ErrorKind::InvalidArgument, "no valid random scene after " + std::to_string(opt.max_tries) + " tries");
}

}  // namespace cp1
