#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fuzzyvis {

/// CURIE-style concept identifier, e.g. "HP:0001350".
using ConceptId = std::string;

struct ConceptRecord {
  ConceptId id;
  std::string label;
  std::optional<std::string> definition;
  /// Sorted, unique.
  std::vector<ConceptId> parents;
  /// Derived from every other record's parents; sorted, unique.
  std::vector<ConceptId> children;

  bool operator==(const ConceptRecord&) const = default;
};

struct ConceptMetadata {
  /// Minimum number of parent edges to any root.
  std::size_t depth = 0;
  /// Distinct descendants, self included.
  std::size_t subtree_size = 1;
  std::size_t child_count = 0;
  bool is_leaf = true;

  bool operator==(const ConceptMetadata&) const = default;
};

/// Validated, immutable taxonomy. Concepts are stored sorted by id; the
/// position of a concept in that order is its index, and every index-based
/// accessor below refers to it.
class OntologyGraph {
 public:
  OntologyGraph() = default;

  /// Validates and freezes a set of records. Only `id`, `label`,
  /// `definition` and `parents` are read; `children` is derived.
  /// Throws DuplicateId, DanglingParent, CycleDetected or MissingId (empty id).
  static OntologyGraph build(std::vector<ConceptRecord> records);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  std::span<const ConceptRecord> records() const noexcept { return records_; }
  const ConceptRecord& record(std::size_t index) const { return records_[index]; }

  bool contains(std::string_view id) const { return index_of(id).has_value(); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  const ConceptRecord* find(std::string_view id) const;
  /// Throws UnknownConcept.
  const ConceptRecord& at(std::string_view id) const;
  std::size_t require_index(std::string_view id) const;

  std::span<const std::size_t> parent_indices(std::size_t index) const { return parents_[index]; }
  std::span<const std::size_t> child_indices(std::size_t index) const { return children_[index]; }
  bool is_leaf(std::size_t index) const { return children_[index].empty(); }

  std::span<const std::size_t> root_indices() const noexcept { return roots_; }
  std::span<const std::size_t> leaf_indices() const noexcept { return leaves_; }
  std::vector<ConceptId> roots() const;
  std::vector<ConceptId> leaves() const;

  /// Parents before children; ties resolved by index.
  std::span<const std::size_t> topological_order() const noexcept { return topo_; }

 private:
  std::vector<ConceptRecord> records_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> leaves_;
  std::vector<std::size_t> topo_;
};

/// OBO flat-file subset: `[Term]` stanzas with id/name/def/is_a/is_obsolete.
/// Obsolete terms are dropped entirely.
OntologyGraph parse_obo(std::string_view text);

/// `{"concepts":[{"id","label","definition"?,"parents":[...]}]}`.
OntologyGraph parse_json(std::string_view text);

/// Serializes to the JSON taxonomy format accepted by parse_json.
std::string to_json_text(const OntologyGraph& graph);

class MetadataTable {
 public:
  MetadataTable() = default;
  explicit MetadataTable(std::vector<ConceptMetadata> rows, const OntologyGraph& graph)
      : rows_(std::move(rows)), graph_(&graph) {}

  const ConceptMetadata& operator[](std::size_t index) const { return rows_[index]; }
  const ConceptMetadata& at(std::string_view id) const { return rows_[graph_->require_index(id)]; }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<ConceptMetadata> rows_;
  const OntologyGraph* graph_ = nullptr;
};

/// The table keeps a pointer to `graph`, which must outlive it.
MetadataTable compute_metadata(const OntologyGraph& graph);

/// Case-insensitive substring match on labels, ranked by
/// (match position, label length, id). Throws EmptyQuery.
std::vector<ConceptId> search_labels(const OntologyGraph& graph, std::string_view query,
                                     std::size_t limit);

/// Descendants of `id` within `depth` child edges plus every ancestor of
/// `id`, as an induced subgraph. Throws UnknownConcept.
OntologyGraph neighborhood(const OntologyGraph& graph, std::string_view id, std::size_t depth);

/// Two-sided path length through the best common ancestor:
/// min over common ancestors W of dist(a, W) + dist(b, W).
/// Throws NotALeaf, NoCommonAncestor.
std::size_t leaf_distance(const OntologyGraph& graph, std::string_view a, std::string_view b);

/// Shortest upward edge count from `index` to each of its ancestors
/// (self at distance 0), keyed by concept index.
std::unordered_map<std::size_t, std::size_t> ancestor_distances(const OntologyGraph& graph,
                                                                 std::size_t index);

}  // namespace fuzzyvis
