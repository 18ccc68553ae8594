#include "cp1/error.hpp"

namespace cp1 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::Tangency: return "Tangency";
    case ErrorKind::RelatorViolation: return "RelatorViolation";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::NotSimple: return "NotSimple";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::NotHyperbolicHolonomy: return "NotHyperbolicHolonomy";
    case ErrorKind::NoValidEpsilon: return "NoValidEpsilon";
    case ErrorKind::CollarOverlap: return "CollarOverlap";
    case ErrorKind::SelfIntersection: return "SelfIntersection";
    case ErrorKind::InterleavedDetours: return "InterleavedDetours";
    case ErrorKind::DegenerateEndpoint: return "DegenerateEndpoint";
    case ErrorKind::TransversalityViolation: return "TransversalityViolation";
    case ErrorKind::TangentCrossing: return "TangentCrossing";
    case ErrorKind::NotABubble: return "NotABubble";
    case ErrorKind::EmbeddingCheckFailed: return "EmbeddingCheckFailed";
    case ErrorKind::NotFullCover: return "NotFullCover";
    case ErrorKind::ArcSynthesisFailed: return "ArcSynthesisFailed";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::DuplicateParameter: return "DuplicateParameter";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      detail_(detail) {}

void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace cp1
