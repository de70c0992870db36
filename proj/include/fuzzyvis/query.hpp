#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fuzzyvis/embedding.hpp"
#include "fuzzyvis/embedding_store.hpp"
#include "fuzzyvis/fuzzy.hpp"
#include "fuzzyvis/ontology.hpp"

namespace fuzzyvis {

enum class QueryOp { concept_ref, conjunction, disjunction, negation };

/// Composite concept expression. Conjunction and disjunction hold two or
/// more children, negation exactly one, a concept reference none.
struct QueryNode {
  QueryOp op = QueryOp::concept_ref;
  ConceptId id;
  std::vector<QueryNode> children;

  static QueryNode ref(ConceptId id);
  /// Throw InvalidParams when given fewer than two children.
  static QueryNode all_of(std::vector<QueryNode> children);
  static QueryNode any_of(std::vector<QueryNode> children);
  static QueryNode negation(QueryNode child);

  bool operator==(const QueryNode&) const = default;
};

/// Throws InvalidParams on an arity violation anywhere in the tree.
void validate(const QueryNode& node);

/// Merges directly nested nodes of the same n-ary operator.
QueryNode flatten(QueryNode node);

/// Grammar, keywords case-insensitive, precedence NOT > AND > OR:
///
///     expr  := or
///     or    := and { "OR" and }
///     and   := unary { "AND" unary }
///     unary := "NOT" unary | "(" expr ")" | atom
///     atom  := bare-token | "double-quoted label"
///
/// Quoted labels match a label exactly, ignoring case. Bare tokens are tried
/// as a concept id first, then as a label. Inside either form a backslash
/// escapes the next character. The result is flattened.
///
/// Throws SyntaxError, UnknownConcept (details: up to five suggestions),
/// AmbiguousLabel (details: every matching id).
QueryNode parse_expression(std::string_view text, const OntologyGraph& graph);

/// Canonical text with minimal parentheses. For flattened trees,
/// parse_expression(format_expression(n)) == n.
std::string format_expression(const QueryNode& node);

/// `{"op":"and"|"or"|"not"|"ref", "children":[...], "id":"..."}`
nlohmann::json to_json(const QueryNode& node);
/// Throws SchemaError (with a JSON path) on malformed input. When `graph`
/// is given, referenced ids must exist (UnknownConcept otherwise).
QueryNode query_from_json(const nlohmann::json& doc, const OntologyGraph* graph = nullptr);

/// Up to `limit` concepts whose labels are closest to `text` by edit
/// distance, formatted as `id (label)`.
std::vector<std::string> suggest_concepts(const OntologyGraph& graph, std::string_view text,
                                          std::size_t limit = 5);

/// Composite embedding: references look up the stored vector, conjunction
/// and disjunction fold the element-wise t-norm / t-conorm over children in
/// order, negation applies 1 - x. Throws MissingEmbedding.
MembershipVector evaluate(const QueryNode& node, const EmbeddingMatrix& matrix,
                          const FuzzyConfig& config);

struct QueryResult {
  std::vector<RankedHit> hits;
  bool zero_query = false;
  std::string echo;
};

/// Throws InvalidParams (k == 0) plus anything evaluate or top_k throw.
QueryResult answer(const QueryNode& node, const VectorIndex& index, const FuzzyConfig& config,
                   std::size_t k);

}  // namespace fuzzyvis
