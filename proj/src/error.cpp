#include "fuzzyvis/error.hpp"

namespace fuzzyvis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingId: return "MissingId";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::NotALeaf: return "NotALeaf";
    case ErrorCode::NoCommonAncestor: return "NoCommonAncestor";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoLeaves: return "NoLeaves";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::HeaderMissing: return "HeaderMissing";
    case ErrorCode::DimMismatchAcrossRows: return "DimMismatchAcrossRows";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::AmbiguousLabel: return "AmbiguousLabel";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::NoEmbedding: return "NoEmbedding";
  }
  return "Unknown";
}

}  // namespace fuzzyvis
