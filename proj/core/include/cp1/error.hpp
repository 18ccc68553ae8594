#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cp1 {

enum class ErrorKind {
  NonInvertible,
  NotHyperbolic,
  BoundaryPoint,
  Tangency,
  RelatorViolation,
  BadIndex,
  BallTooLarge,
  NotSimple,
  NotDisjoint,
  NotHyperbolicHolonomy,
  NoValidEpsilon,
  CollarOverlap,
  SelfIntersection,
  InterleavedDetours,
  DegenerateEndpoint,
  TransversalityViolation,
  TangentCrossing,
  NotABubble,
  EmbeddingCheckFailed,
  NotFullCover,
  ArcSynthesisFailed,
  Inconclusive,
  DuplicateParameter,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace cp1
