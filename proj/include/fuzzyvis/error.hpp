#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyvis {

enum class ErrorCode {
  // ontology parsing / validation
  MissingId,
  DuplicateId,
  DanglingParent,
  CycleDetected,
  SchemaError,
  // graph queries
  UnknownConcept,
  NotALeaf,
  NoCommonAncestor,
  EmptyQuery,
  // fuzzy algebra
  InvalidDegree,
  EmptyList,
  DimensionMismatch,
  // embeddings
  InvalidParams,
  NoLeaves,
  EmptyMatrix,
  EmptyIndex,
  HeaderMissing,
  DimMismatchAcrossRows,
  ValueOutOfRange,
  // query language
  SyntaxError,
  AmbiguousLabel,
  MissingEmbedding,
  // service
  UnsupportedFormat,
  UnknownInstance,
  UnknownJob,
  NoEmbedding,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception. `details` carries
/// machine-readable extras (offending ids, line numbers, suggestions) in a
/// stable order so API responses stay deterministic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {},
        long position = -1)
      : std::runtime_error(message), code_(code), details_(std::move(details)), position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }
  /// Character offset for syntax errors, -1 otherwise.
  long position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
  long position_;
};

}  // namespace fuzzyvis
