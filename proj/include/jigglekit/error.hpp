#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jigglekit {

enum class ErrorCode {
  FaceIntersectionViolation,
  DegenerateSimplex,
  QueryNotInComplex,
  RankDeficient,
  AmbientMismatch,
  OutsideChart,
  CollarTooSmall,
  DomainMismatch,
  NotOpposingFaces,
  PreconditionViolated,
  NotTransverse,
  InfeasibleDimensions,
  StarNotTransverse,
  PerturbationFailed,
  EmbeddingLost,
  LevelExhausted,
  SkeletonViolation,
  VolumeMismatch,
  UnsupportedDimension,
  BudgetViolation,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jigglekit
