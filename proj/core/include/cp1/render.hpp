#pragma once

#include <string>

#include "cp1/arc_model.hpp"
#include "cp1/config.hpp"
#include "cp1/structure_model.hpp"
#include "cp1/surgery.hpp"

namespace cp1 {

enum class RenderModel { HalfPlane, Disk };

struct RenderLayers {
  bool axes = true;
  bool collars = true;
  bool arc = true;
  bool reroute = true;
  bool detours = true;
  bool labels = true;

  static RenderLayers none() { return {false, false, false, false, false, false}; }
  // Comma separated layer names, or "all".
  static RenderLayers parse(const std::string& list);
};

struct RenderScene {
  const GraftedStructure* structure = nullptr;
  const DevelopedArc* arc = nullptr;
  const ReroutePlan* plan = nullptr;
};

// Cayley transform and its inverse.
Complex halfplane_to_disk(Complex z);
Complex disk_to_halfplane(Complex w);

// Deterministic SVG 1.1 text; coordinates printed with 6 decimals.
std::string render_svg(const RenderScene& scene, const RenderLayers& layers = {},
                       RenderModel model = RenderModel::HalfPlane, const Config& cfg = {});

}  // namespace cp1
