#pragma once

#include <string>
#include <vector>

#include "cp1/arc_model.hpp"
#include "cp1/config.hpp"
#include "cp1/structure_model.hpp"

namespace cp1 {

struct SceneCurve {
  std::string word;
  int weight = 1;
};

// Text form of a scene:
//   cp1-scene v1
//   genus 2
//   curve a1 1
//   point -0.5 1.2
//   override 0 0.08 -1
//   config epsilon_cap 0.05
struct Scene {
  int genus = 2;
  std::vector<SceneCurve> curves;
  std::vector<Complex> points;
  DetourOverrides overrides;
  std::vector<std::pair<std::string, std::string>> settings;
};

// Throws ParseError with a "line:column: " prefix.
Scene parse_scene(const std::string& text);
Scene read_scene_file(const std::string& path);
std::string format_scene(const Scene& s);

struct LoadedScene {
  Scene scene;
  Config config;
  GraftedStructure structure;
  DevelopedArc arc;
  bool has_arc() const { return !arc.pieces.empty(); }
};

// Applies the scene's config lines on top of base, builds the structure and
// develops the polyline (no bubbleability checks).
LoadedScene load_scene(const Scene& s, const Config& base = {});

}  // namespace cp1
