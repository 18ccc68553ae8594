#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cp1/scene.hpp"

namespace cp1 {

using SceneRng = std::mt19937_64;

struct RandomSceneOptions {
  int genus_min = 2;
  int genus_max = 3;
  int max_regions = 3;
  int max_weight = 3;
  int max_crossings_per_region = 4;
  int min_crossings = 1;
  int min_points = 2;
  int max_points = 4;
  double point_radius = 1.3;  // hyperbolic radius about i
  bool allow_separating = true;
  int max_tries = 2000;
};

// Words of pairwise disjoint simple closed curves: one of a_i or b_i per
// handle, optionally with the curve a_i b_i A_i B_i cutting that handle off.
std::vector<std::string> random_curve_family(int genus, SceneRng& rng, int max_regions, bool allow_separating);

std::vector<SceneCurve> random_multicurve(int genus, SceneRng& rng, int max_regions, int max_weight,
                                          bool allow_separating);

// Uniform in the hyperbolic disk of the given radius about i.
Complex random_point(SceneRng& rng, double radius);

// Vertices near i, mostly in pairs on opposite sides of a nearby lift.
std::vector<Complex> random_polyline(const GraftedStructure& s, SceneRng& rng, const RandomSceneOptions& opt = {},
                                     const Config& cfg = {});

// Number of polyline crossings of each region.
std::vector<int> crossings_per_region(const GraftedStructure& s, const DevelopedArc& arc);

// A scene whose arc is bubbleable, transversal and within the crossing bounds.
// Throws InvalidArgument after max_tries rejected candidates.
LoadedScene random_scene(SceneRng& rng, const RandomSceneOptions& opt = {}, const Config& cfg = {});

// Structure only (no arc).
LoadedScene random_structure(SceneRng& rng, int genus, int max_regions, int max_weight, bool allow_separating,
                             const Config& cfg = {});

}  // namespace cp1
