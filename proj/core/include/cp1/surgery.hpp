#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cp1/arc_model.hpp"
#include "cp1/config.hpp"
#include "cp1/oracle.hpp"
#include "cp1/structure_model.hpp"

namespace cp1 {

GraftedStructure graft(const GraftedStructure& s, const GroupWord& word, int m, const Config& cfg = {});

struct BubbleRecord {
  GraftedStructure base;
  DevelopedArc arc;

  Complex branch_start() const { return arc.start(); }
  Complex branch_end() const { return arc.end(); }
};

// A bubbling, kept as the list of (structure, arc) pairs known to bubble to it.
// The first entry is the presentation it was built from.
class BranchedStructure {
 public:
  explicit BranchedStructure(BubbleRecord primary) { presentations_.push_back(std::move(primary)); }

  const BubbleRecord& primary() const { return presentations_.front(); }
  const std::vector<BubbleRecord>& presentations() const { return presentations_; }
  const FuchsianRep& rep() const { return primary().base.rep(); }
  int branch_point_count() const { return 2; }

  void add_presentation(BubbleRecord r) { presentations_.push_back(std::move(r)); }

 private:
  std::vector<BubbleRecord> presentations_;
};

// Same kind of pieces with endpoints within tol.
bool same_arc(const DevelopedArc& a, const DevelopedArc& b, double tol = 1e-9);
bool same_presentation(const BubbleRecord& a, const BubbleRecord& b, const Config& cfg = {});

BranchedStructure bubble(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg = {});

enum class StepKind { FollowBeta, FollowZeta, FollowGamma, FollowXi, OffAxisHop };

std::string to_string(StepKind k);

struct RouteStep {
  StepKind kind = StepKind::FollowBeta;
  int unit = -1;  // detour index along the arc
  int region = -1;
  int annulus = 0;
  int record = 0;  // k within (region, annulus), 1-based
  int omega = 1;
  int direction = 0;  // +-1 along the lift frame for FollowGamma
  GroupWord sheet;    // deck word applied to this step
  GroupWord lift;
  double from = 0.0;  // axis parameters (FollowGamma) or piece range (FollowBeta)
  double to = 0.0;
  std::size_t first_piece = 0;  // pieces of the rerouted arc produced by this step
  std::size_t piece_count = 0;
};

// A piece of the rerouted arc in the chart of its sheet; the developed piece
// is rho(sheet) applied to local.
struct SheetPiece {
  GroupWord sheet;
  ArcPiece local;
};

struct ReroutePlan {
  GraftedStructure source;
  DevelopedArc source_arc;
  CrossingTable table;
  std::vector<RouteStep> steps;
  DevelopedArc rerouted;
  std::vector<SheetPiece> charted;
  GraftedStructure result;
  GroupWord end_word;
  MobiusMap end_map;
  std::vector<int> engulfed;  // annuli removed per region
  double endpoint_residual = 0.0;
  double joint_residual = 0.0;  // largest gap between consecutive pieces
  double min_imaginary = 0.0;
  EmbeddingVerdict verdict;
  bool verified = false;
};

ReroutePlan reroute(const GraftedStructure& s, const DevelopedArc& arc, const Config& cfg = {});

// One-line-per-step text form of a plan.
std::string plan_report(const ReroutePlan& plan);

struct MachineState {
  int k = 1;  // position in the cyclic order alpha, 1-based
  int omega = 1;
};

// Transition of the crossing machine inside one annulus table, and its inverse.
MachineState machine_successor(const AnnulusTable& t, const MachineState& st);
MachineState machine_predecessor(const AnnulusTable& t, const MachineState& st);

// Natural debubbling: the presentation the bubbling was built from.
std::pair<GraftedStructure, DevelopedArc> debubble(const BranchedStructure& b);
// Debubbling along the other side of a certified plan. NotABubble unless one
// side of the plan is a presentation of b.
std::pair<GraftedStructure, DevelopedArc> debubble(const BranchedStructure& b, const ReroutePlan& plan,
                                                   const Config& cfg = {});
// Debubbling onto a listed presentation with the given base structure.
std::pair<GraftedStructure, DevelopedArc> debubble_to(const BranchedStructure& b, const GraftedStructure& target,
                                                      const Config& cfg = {});

// Records the other side of the plan as an equivalent presentation.
void certify(BranchedStructure& b, const ReroutePlan& plan, const Config& cfg = {});

std::pair<GraftedStructure, DevelopedArc> degraft_full(const GraftedStructure& s, const DevelopedArc& arc,
                                                       const Config& cfg = {});

// Polyline arc crossing every grafting region exactly once.
DevelopedArc synthesize_full_cover_arc(const GraftedStructure& s, const Config& cfg = {});

struct Move {
  enum class Kind { Bubbling, Debubbling };
  Kind kind = Kind::Bubbling;
  // bubbling: the structure and arc bubbled; debubbling: the structure and arc reached
  GraftedStructure structure;
  DevelopedArc arc;
  // debubbling through a rerouted presentation
  std::shared_ptr<const ReroutePlan> plan;
  std::string note;
};

struct MoveSequence {
  std::vector<Move> moves;
  int bubblings() const;
  int debubblings() const;
  std::string report() const;
};

MoveSequence plan_join(const GraftedStructure& sigma, const GraftedStructure& tau, const Config& cfg = {});
MoveSequence plan_join_branched(const BranchedStructure& sigma, const BranchedStructure& tau,
                                const Config& cfg = {});

// Re-executes every move of the sequence; throws on the first invalid one.
void replay_moves(const MoveSequence& seq, const Config& cfg = {});
void replay_moves(const MoveSequence& seq, const BranchedStructure& start, const Config& cfg = {});

}  // namespace cp1
