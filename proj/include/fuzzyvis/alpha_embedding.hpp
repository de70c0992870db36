#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fuzzyvis/embedding.hpp"
#include "fuzzyvis/fuzzy.hpp"
#include "fuzzyvis/ontology.hpp"

namespace fuzzyvis {

/// Synthetic fuzzy interpretation over a taxonomy.
///
/// Each domain element anchors one leaf drawn uniformly (with replacement)
/// from the id-sorted leaf list. The anchor gets degree 1, every other leaf
/// `alpha^d` where d is the leaf distance to the anchor (0 when the two share
/// no ancestor), and every internal concept the t-conorm fold of its direct
/// children's degrees.
struct AlphaParams {
  /// Fading parameter, strictly inside (0, 1).
  double alpha = 0.5;
  /// Number of domain elements (embedding dimension).
  std::size_t dim = 1;
  std::uint64_t seed = 0;

  /// Throws InvalidParams.
  void validate() const;
};

/// Deterministic per-column random stream. The stream for column `i` depends
/// only on (seed, i), so columns can be produced in any order or in parallel.
class ColumnStream {
 public:
  ColumnStream(std::uint64_t seed, std::uint64_t column);

  std::uint64_t next();
  /// Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Index (into graph.leaf_indices()) of the anchor leaf for a column.
std::size_t anchor_for_column(const OntologyGraph& graph, std::uint64_t seed, std::uint64_t column);

/// Degrees of every leaf for one anchor. Throws NotALeaf.
std::map<ConceptId, double> anchor_memberships(const OntologyGraph& graph,
                                               std::string_view anchor_leaf, double alpha);

/// Extends leaf degrees to every concept by folding children's degrees with
/// the configured t-conorm, children in id order. Throws InvalidParams when a
/// leaf is missing from `leaf_degrees`.
std::map<ConceptId, double> lift_internal(const OntologyGraph& graph,
                                          const std::map<ConceptId, double>& leaf_degrees,
                                          const FuzzyConfig& config);

/// One column of the interpretation, indexed like graph.records().
std::vector<double> generate_column(const OntologyGraph& graph, double alpha, std::uint64_t seed,
                                    std::uint64_t column, const FuzzyConfig& config);

/// Full embedding matrix covering every concept. `threads == 0` uses the
/// hardware concurrency; the result never depends on the thread count.
/// Throws NoLeaves, InvalidParams.
EmbeddingMatrix generate(const OntologyGraph& graph, const AlphaParams& params,
                         const FuzzyConfig& config, unsigned threads = 0);

}  // namespace fuzzyvis
