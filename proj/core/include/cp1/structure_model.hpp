#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cp1/config.hpp"
#include "cp1/hyp_core.hpp"
#include "cp1/surface_group.hpp"

namespace cp1 {

struct MulticurveComponent {
  GroupWord word;
  int weight = 1;
};

struct WeightedMulticurve {
  std::vector<MulticurveComponent> components;

  bool empty() const { return components.empty(); }
  int total_weight() const;
  int max_weight() const;
  std::string to_string() const;
};

// Per-component geometry. The base frame puts the oriented axis of the
// holonomy on the imaginary axis, attracting end up, with s = 0 at the foot
// of the perpendicular from i.
struct RegionGeometry {
  GroupWord word;
  int weight = 1;
  MobiusMap holonomy;
  double length = 0.0;
  AxisFrame base_frame;
};

struct LiftCache;

class GraftedStructure {
 public:
  GraftedStructure() = default;

  const FuchsianRep& rep() const { return *rep_; }
  const RepPtr& rep_ptr() const { return rep_; }
  const WeightedMulticurve& multicurve() const { return multicurve_; }
  const std::vector<RegionGeometry>& regions() const { return regions_; }
  const RegionGeometry& region(int i) const { return regions_.at(static_cast<std::size_t>(i)); }
  int region_count() const { return static_cast<int>(regions_.size()); }
  bool is_uniformizing() const { return regions_.empty(); }

 private:
  friend GraftedStructure build_structure(RepPtr, WeightedMulticurve, const Config&);
  friend struct LiftCache;
  RepPtr rep_;
  WeightedMulticurve multicurve_;
  std::vector<RegionGeometry> regions_;
  std::shared_ptr<LiftCache> lifts_;
};

GraftedStructure build_structure(RepPtr rep, WeightedMulticurve multicurve, const Config& cfg = {});
GraftedStructure uniformizing_structure(RepPtr rep);

struct GraftingRegionInfo {
  int component = 0;
  int weight = 1;
  GeodesicSeg axis;
  int first_annulus = 1;
  int last_annulus = 1;
  // boundary real-curve labels per annulus, left then right
  std::vector<std::pair<std::string, std::string>> boundary_labels;
};

GraftingRegionInfo region_info(const GraftedStructure& s, int component);

struct RegionDecomposition {
  int component = 0;
  int weight = 0;
  int negative_annuli = 0;
  int positive_annuli = 0;
  int real_curves = 0;
};

struct DecompositionSummary {
  int positive_components = 0;
  int negative_components = 0;
  int real_curves = 0;
  std::vector<RegionDecomposition> regions;
};

DecompositionSummary decomposition_summary(const GraftedStructure& s);

// Same conjugacy class as unoriented closed curves.
bool same_class(const FuchsianRep& rep, const GroupWord& w1, const GroupWord& w2, const Config& cfg = {});
bool same_structure(const GraftedStructure& a, const GraftedStructure& b, const Config& cfg = {});

// A lift g * axis(region) with its own frame (base frame moved by g).
struct LiftedAxis {
  int region = 0;
  GroupWord word;
  MobiusMap map;
  AxisFrame frame;
  HPoint repelling, attracting;
  int weight = 1;
};

// Distinct lifts of all region axes meeting the hyperbolic ball of the given
// radius about center; the representative word is the shortest one found.
std::vector<LiftedAxis> lifts_near(const GraftedStructure& s, Complex center, double radius,
                                   const Config& cfg = {});

bool same_lift(const LiftedAxis& a, const LiftedAxis& b);

struct EpsilonContext {
  std::vector<LiftedAxis> translates;
  // extra upper bound from arc clearance (infinite when unused)
  double clearance_bound = std::numeric_limits<double>::infinity();
};

// Minimal pairwise distance between distinct translates (infinite if < 2).
double min_translate_separation(const std::vector<LiftedAxis>& translates);

double choose_epsilon(const GraftedStructure& s, const EpsilonContext& ctx, const Config& cfg = {});

struct CollarBand {
  int annulus = 1;  // 1 is adjacent to the left copy of the curve
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
};

// Curves gamma_j (j = -M..M) sit at signed offset u = -j * eps in the base
// frame; band h is bounded by gamma_{-M+2h-2} and gamma_{-M+2h}.
struct CollarSystem {
  int region = 0;
  int weight = 1;
  double epsilon = 0.0;
  double length = 0.0;
  AxisFrame base_frame;
  std::vector<int> indices;
  std::vector<HypercycleSeg> curves;
  std::vector<CollarBand> bands;

  const HypercycleSeg& curve(int j) const;
  const CollarBand& band(int h) const { return bands.at(static_cast<std::size_t>(h - 1)); }
};

double band_center(int weight, int annulus, double eps);

CollarSystem collar_system(const GraftedStructure& s, int region, double eps,
                           const std::vector<LiftedAxis>& translates = {}, const Config& cfg = {});

}  // namespace cp1
