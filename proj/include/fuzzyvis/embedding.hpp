#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fuzzyvis/fuzzy.hpp"
#include "fuzzyvis/ontology.hpp"

namespace fuzzyvis {

/// One concept's membership degrees over the ordered interpretation domain.
using MembershipVector = std::vector<double>;

enum class EmbeddingSource { generated, imported };

struct Provenance {
  EmbeddingSource source = EmbeddingSource::generated;
  Family family = Family::product;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;

  bool operator==(const Provenance&) const = default;
};

/// Dense row-major store of membership vectors, rows sorted by concept id.
/// Every entry lies in [0, 1].
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  /// Throws DuplicateId, DimensionMismatch (row length != dim),
  /// ValueOutOfRange (entry outside [0,1] or NaN), InvalidParams (dim == 0).
  static EmbeddingMatrix from_rows(std::size_t dim,
                                   std::vector<std::pair<ConceptId, MembershipVector>> rows,
                                   Provenance provenance);

  /// Takes ownership of an already validated, id-sorted layout.
  static EmbeddingMatrix from_dense(std::size_t dim, std::vector<ConceptId> sorted_ids,
                                    std::vector<double> data, Provenance provenance);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  std::span<const ConceptId> ids() const noexcept { return ids_; }
  const ConceptId& id(std::size_t row) const { return ids_[row]; }
  std::span<const double> row(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return data_; }

  std::optional<std::size_t> row_of(std::string_view id) const;
  bool contains(std::string_view id) const { return row_of(id).has_value(); }
  /// Throws MissingEmbedding.
  std::span<const double> vector(std::string_view id) const;

  const Provenance& provenance() const noexcept { return provenance_; }

  bool operator==(const EmbeddingMatrix& other) const {
    return dim_ == other.dim_ && ids_ == other.ids_ && data_ == other.data_ &&
           provenance_ == other.provenance_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<ConceptId> ids_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> lookup_;
  Provenance provenance_;
};

}  // namespace fuzzyvis
