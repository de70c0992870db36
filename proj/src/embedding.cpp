#include "fuzzyvis/embedding.hpp"

#include <algorithm>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

EmbeddingMatrix EmbeddingMatrix::from_rows(
    std::size_t dim, std::vector<std::pair<ConceptId, MembershipVector>> rows,
    Provenance provenance) {
  if (dim == 0) throw Error(ErrorCode::InvalidParams, "embedding dimension must be >= 1");
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<ConceptId> ids;
  std::vector<double> data;
  ids.reserve(rows.size());
  data.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& [id, values] = rows[i];
    if (!ids.empty() && id == ids.back())
      throw Error(ErrorCode::DuplicateId, "duplicate embedding row '" + id + "'", {id});
    if (values.size() != dim)
      throw Error(ErrorCode::DimensionMismatch,
                  "row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(dim),
                  {id});
    for (double v : values)
      if (!(v >= 0.0 && v <= 1.0))
        throw Error(ErrorCode::ValueOutOfRange,
                    "row '" + id + "' holds " + format_double(v) + " outside [0, 1]", {id});
    ids.push_back(std::move(id));
    data.insert(data.end(), values.begin(), values.end());
  }
  return from_dense(dim, std::move(ids), std::move(data), provenance);
}

EmbeddingMatrix EmbeddingMatrix::from_dense(std::size_t dim, std::vector<ConceptId> sorted_ids,
                                            std::vector<double> data, Provenance provenance) {
  EmbeddingMatrix m;
  m.dim_ = dim;
  m.ids_ = std::move(sorted_ids);
  m.data_ = std::move(data);
  m.provenance_ = provenance;
  m.lookup_.reserve(m.ids_.size());
  for (std::size_t i = 0; i < m.ids_.size(); ++i) m.lookup_.emplace(m.ids_[i], i);
  return m;
}

std::optional<std::size_t> EmbeddingMatrix::row_of(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingMatrix::vector(std::string_view id) const {
  auto r = row_of(id);
  if (!r)
    throw Error(ErrorCode::MissingEmbedding, "no embedding for concept '" + std::string(id) + "'",
                {std::string(id)});
  return row(*r);
}

}  // namespace fuzzyvis
