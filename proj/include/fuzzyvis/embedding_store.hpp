#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyvis/embedding.hpp"
#include "fuzzyvis/ontology.hpp"

namespace fuzzyvis {

struct RankedHit {
  ConceptId concept_id;
  double score = 0.0;

  bool operator==(const RankedHit&) const = default;
};

struct TopK {
  std::vector<RankedHit> hits;
  /// Set when the query vector has zero norm: every score is 0 by convention.
  bool zero_query = false;
};

/// Cosine similarity; 0 when either vector has zero norm.
/// Throws DimensionMismatch.
double cosine(std::span<const double> u, std::span<const double> v);

/// Immutable exhaustive-scan index with precomputed norms. Entries are the
/// matrix rows, in id order; the matrix is shared, not copied.
class VectorIndex {
 public:
  /// Throws EmptyMatrix.
  explicit VectorIndex(std::shared_ptr<const EmbeddingMatrix> matrix);
  explicit VectorIndex(const EmbeddingMatrix& matrix)
      : VectorIndex(std::make_shared<const EmbeddingMatrix>(matrix)) {}

  std::size_t dim() const noexcept { return matrix_->dim(); }
  std::size_t size() const noexcept { return matrix_->size(); }
  const ConceptId& id(std::size_t entry) const { return matrix_->id(entry); }
  std::span<const double> vector(std::size_t entry) const { return matrix_->row(entry); }
  double norm(std::size_t entry) const { return norms_[entry]; }
  const EmbeddingMatrix& matrix() const noexcept { return *matrix_; }

  /// Sorted by score descending, ties by id ascending; at most k hits.
  /// Throws DimensionMismatch, EmptyIndex, InvalidParams (k == 0).
  TopK top_k(std::span<const double> query, std::size_t k) const;

 private:
  std::shared_ptr<const EmbeddingMatrix> matrix_;
  std::vector<double> norms_;
};

struct ImportResult {
  EmbeddingMatrix matrix;
  /// Clamped values and rows dropped for unknown concepts.
  std::vector<std::string> warnings;
  std::vector<ConceptId> unknown_concepts;
};

/// Reads the `#fuzzyvis-embedding v1` text format. With a graph, rows for
/// concepts the graph does not contain are reported and dropped.
/// Throws HeaderMissing, DimMismatchAcrossRows, ValueOutOfRange, DuplicateId.
ImportResult import_embedding(std::string_view text, const OntologyGraph* graph = nullptr);

std::string export_embedding(const EmbeddingMatrix& matrix);
void export_embedding(const EmbeddingMatrix& matrix, std::ostream& sink);

}  // namespace fuzzyvis
