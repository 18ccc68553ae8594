#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cp1/config.hpp"
#include "cp1/hyp_core.hpp"
#include "cp1/structure_model.hpp"

namespace cp1 {

// Passage through one grafting annulus, stored by its endpoints on the lift
// axis g * gamma. Banks: the arc leaves H^2 on the entry bank and comes back on
// the other one.
struct Detour {
  int region = 0;
  GroupWord lift;
  MobiusMap lift_map;
  AxisFrame frame;
  int annulus = 1;
  double s_in = 0.0;
  double s_out = 0.0;
  int winding = 0;
  bool from_left = true;

  Complex entry_point() const { return frame.from_fermi(s_in, 0.0); }
  Complex exit_point() const { return frame.from_fermi(s_out, 0.0); }
  Detour reversed() const;
  Detour transformed(const MobiusMap& m) const;
};

using ArcPiece = std::variant<GeodesicSeg, HypercycleSeg, Detour>;

Complex piece_start(const ArcPiece& p);
Complex piece_end(const ArcPiece& p);
ArcPiece piece_reversed(const ArcPiece& p);
ArcPiece piece_transformed(const ArcPiece& p, const MobiusMap& m);
bool is_detour(const ArcPiece& p);

enum class ArcProvenance { Polyline, Rerouted };

struct DevelopedArc {
  std::vector<ArcPiece> pieces;
  ArcProvenance provenance = ArcProvenance::Polyline;
  // source vertices of a polyline arc
  std::vector<Complex> polyline;

  Complex start() const;
  Complex end() const;
  std::size_t detour_count() const;
  bool has_detours() const { return detour_count() > 0; }
};

// Explicit shape of the detour chain created at one polyline crossing.
struct DetourOverride {
  std::optional<double> shift;
  std::optional<int> drift;
};

// Crossings are numbered from 0 in order along the polyline.
using DetourOverrides = std::map<int, DetourOverride>;

DevelopedArc develop_polyline(const GraftedStructure& s, const std::vector<Complex>& points,
                              const DetourOverrides& overrides = {}, const Config& cfg = {});

// Plain H^2 arc through the given vertices (no detours).
DevelopedArc polyline_arc(const std::vector<Complex>& points);

// All lifts of region axes that matter for the arc.
std::vector<LiftedAxis> arc_lifts(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg = {});

void validate_bubbleable(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg = {});

// Position of an axis parameter on the boundary circle of CP1 minus the
// closed axis: left bank in (0, pi), right bank in (pi, 2 pi).
double bank_position(double s, bool left_bank);

struct BankPoint {
  double s = 0.0;
  bool left_bank = true;
};

struct CrossingRecord {
  int region = 0;
  int annulus = 1;
  int index = 1;  // k, order along the arc within (region, annulus)
  int unit = 0;   // order among all detours of the arc
  int chain = 0;
  int position = 1;  // place in the chain of its crossing
  GroupWord lift;
  MobiusMap lift_map;
  AxisFrame frame;
  bool from_left = true;
  int entry_side = 1;  // +1 entered from the left of the lift axis
  BankPoint in, out, in_twin, out_twin;
  double t_in = 0.0;  // parameters modulo the length of the closed curve
  double t_out = 0.0;
  // collar anchors I^-1 and O^+1 and the entry/exit points on the center curve
  Complex anchor_in, anchor_out, center_in, center_out;
  double center_u = 0.0;
  int coherence = 1;
  int omega = 1;
};

struct AnnulusTable {
  int region = 0;
  int annulus = 1;
  double length = 0.0;
  int orientation = 1;            // induced orientation relative to the base frame
  std::vector<CrossingRecord> records;  // arc order
  std::vector<int> sigma;         // alpha_k = beta_{sigma(k)}, 1-based
  std::vector<std::vector<int>> coherence_matrix;

  int count() const { return static_cast<int>(records.size()); }
  const CrossingRecord& beta(int k) const { return records.at(static_cast<std::size_t>(k - 1)); }
  const CrossingRecord& alpha(int k) const { return beta(sigma.at(static_cast<std::size_t>(k - 1))); }
};

struct UnitRef {
  int table = 0;
  int record = 0;  // 0-based into the table's records
  std::size_t piece = 0;
};

struct CrossingTable {
  double epsilon = 0.0;
  double clearance = 0.0;
  std::vector<AnnulusTable> tables;
  std::vector<UnitRef> units;  // arc order
  std::vector<LiftedAxis> lifts;

  const AnnulusTable* find(int region, int annulus) const;
  int crossing_count() const;
};

CrossingTable extract_crossings(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg = {});

enum class CrossingObject { In, Out, AnchorIn, AnchorOut, Zeta, Xi };

struct CrossingDatum {
  CrossingObject object = CrossingObject::In;
  int k = 1;
  bool operator==(const CrossingDatum& o) const { return object == o.object && k == o.k; }
};

CrossingDatum z2_act(int sign, const CrossingDatum& x);
std::string to_string(CrossingObject o);

DevelopedArc reverse(const DevelopedArc& arc);

}  // namespace cp1
