#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cp1/config.hpp"
#include "cp1/hyp_core.hpp"

namespace cp1 {

// Letters: +(2i-1) = a_i, +2i = b_i, negatives are inverses.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<int> letters);

  static GroupWord parse(std::string_view text, int genus);
  static GroupWord generator(int letter) { return GroupWord({letter}); }

  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  std::string to_string() const;

  GroupWord inverse() const;
  GroupWord operator*(const GroupWord& o) const;
  GroupWord power(int n) const;
  bool operator==(const GroupWord& o) const { return letters_ == o.letters_; }

 private:
  std::vector<int> letters_;
};

class FuchsianRep {
 public:
  FuchsianRep(int genus, std::vector<MobiusMap> generators, double tau_alg = kTauAlg);

  int genus() const { return genus_; }
  int generator_count() const { return 2 * genus_; }
  const std::vector<MobiusMap>& generators() const { return gens_; }
  const MobiusMap& letter(int l) const;
  double relator_residual() const { return residual_; }

  // bit-level equality of generator entries
  bool operator==(const FuchsianRep& o) const;

 private:
  int genus_;
  std::vector<MobiusMap> gens_;
  std::vector<MobiusMap> invs_;
  double residual_ = 0.0;
};

using RepPtr = std::shared_ptr<const FuchsianRep>;

FuchsianRep canonical_rep(int genus);
RepPtr canonical_rep_ptr(int genus);

// Inradius of the regular 4g-gon with angle sum 2 pi, by bisection.
double regular_polygon_inradius(int genus);

MobiusMap evaluate(const FuchsianRep& rep, const GroupWord& w);

// Residual of the product of commutators against +-Identity.
double relator_residual(int genus, const std::vector<MobiusMap>& gens);

struct BallElement {
  GroupWord word;
  MobiusMap map;
};

std::vector<BallElement> enumerate_ball(const FuchsianRep& rep, int radius, const Config& cfg = {});

// Memoized ball shared across calls (thread-safe).
std::shared_ptr<const std::vector<BallElement>> cached_ball(const FuchsianRep& rep, int radius,
                                                            const Config& cfg = {});

// Number of freely reduced words of length <= radius on 2g generators.
double free_ball_count(int genus, int radius);

// L_disj clamped so that the free count fits the ball cap.
int effective_radius(int genus, int requested, const Config& cfg);

// Every nontrivial reduced word of length <= length has |trace| >= 2 - tol.
bool passes_discreteness_heuristic(const FuchsianRep& rep, int length, double tol = kTauAlg);

// Exponent sums mod 2 for each generator.
std::vector<int> homology_mod2(const GroupWord& w, int genus);

}  // namespace cp1
