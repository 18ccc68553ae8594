#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cp1/config.hpp"
#include "cp1/hyp_core.hpp"
#include "cp1/surface_group.hpp"

namespace cp1 {

struct DevelopedArc;

// Vertices of a chain of Euclidean chords; hyperbolic deviation from the
// source curve is at most `deviation`.
struct PolylineApprox {
  std::vector<Complex> vertices;
  double deviation = 0.0;
};

PolylineApprox approximate(const Curve& c, double max_deviation, int max_depth = 40);

struct EmbeddingVerdict {
  bool embedded = true;
  bool inconclusive = false;
  std::size_t piece_a = 0;
  std::size_t piece_b = 0;
  Complex where{};
  double gap = 0.0;

  std::string to_string() const;
};

// Brute-force embeddedness of a path of curves: chords of a refined polyline,
// compared pairwise after an x-sweep.
EmbeddingVerdict embedded_check(const std::vector<Curve>& path, const Config& cfg = {});
// H^2 pieces of the arc only; detours are checked combinatorially elsewhere.
EmbeddingVerdict embedded_check(const DevelopedArc& arc, const Config& cfg = {});

// Curves stored in deck-group charts: curve i lies at rho(charts[chart_of[i]])
// applied to local[i]. joined[i]: curve i starts where curve i - 1 ends.
struct ChartedPath {
  std::vector<GroupWord> charts;
  std::vector<std::size_t> chart_of;
  std::vector<Curve> local;
  std::vector<bool> joined;
};

// Pairs of charts are compared through their relative deck map; pairs whose
// hulls are far apart are skipped.
EmbeddingVerdict embedded_check(const FuchsianRep& rep, const ChartedPath& path, const Config& cfg = {});

// Returned by halfplane_check when the arc leaves H^2 through a detour.
inline constexpr double kLeavesHalfPlane = -1.0;

double halfplane_check(const std::vector<Curve>& path, const Config& cfg = {});
double halfplane_check(const DevelopedArc& arc, const Config& cfg = {});

using Chord = std::pair<double, double>;

// First interleaved pair of chords, if any. Throws DuplicateParameter when two
// endpoints agree within tol.
std::optional<std::pair<std::size_t, std::size_t>> find_interleaved_chords(const std::vector<Chord>& chords,
                                                                           double tol = 0.0);
bool noncrossing_chords_check(const std::vector<Chord>& chords, double tol = 0.0);

}  // namespace cp1
