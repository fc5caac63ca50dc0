#include "jigglekit/error.hpp"

namespace jigglekit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FaceIntersectionViolation: return "FaceIntersectionViolation";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::QueryNotInComplex: return "QueryNotInComplex";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::OutsideChart: return "OutsideChart";
    case ErrorCode::CollarTooSmall: return "CollarTooSmall";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::NotOpposingFaces: return "NotOpposingFaces";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::InfeasibleDimensions: return "InfeasibleDimensions";
    case ErrorCode::StarNotTransverse: return "StarNotTransverse";
    case ErrorCode::PerturbationFailed: return "PerturbationFailed";
    case ErrorCode::EmbeddingLost: return "EmbeddingLost";
    case ErrorCode::LevelExhausted: return "LevelExhausted";
    case ErrorCode::SkeletonViolation: return "SkeletonViolation";
    case ErrorCode::VolumeMismatch: return "VolumeMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::BudgetViolation: return "BudgetViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace jigglekit
