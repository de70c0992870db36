#include "fuzzyvis/query.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

QueryNode QueryNode::ref(ConceptId id) { return QueryNode{QueryOp::concept_ref, std::move(id), {}}; }

QueryNode QueryNode::all_of(std::vector<QueryNode> children) {
  if (children.size() < 2) throw Error(ErrorCode::InvalidParams, "AND needs at least two operands");
  return QueryNode{QueryOp::conjunction, {}, std::move(children)};
}

QueryNode QueryNode::any_of(std::vector<QueryNode> children) {
  if (children.size() < 2) throw Error(ErrorCode::InvalidParams, "OR needs at least two operands");
  return QueryNode{QueryOp::disjunction, {}, std::move(children)};
}

QueryNode QueryNode::negation(QueryNode child) {
  QueryNode n{QueryOp::negation, {}, {}};
  n.children.push_back(std::move(child));
  return n;
}

void validate(const QueryNode& node) {
  switch (node.op) {
    case QueryOp::concept_ref:
      if (node.id.empty() || !node.children.empty())
        throw Error(ErrorCode::InvalidParams, "concept reference needs an id and no children");
      return;
    case QueryOp::conjunction:
    case QueryOp::disjunction:
      if (node.children.size() < 2)
        throw Error(ErrorCode::InvalidParams, "AND/OR need at least two operands");
      break;
    case QueryOp::negation:
      if (node.children.size() != 1)
        throw Error(ErrorCode::InvalidParams, "NOT takes exactly one operand");
      break;
  }
  for (const auto& c : node.children) validate(c);
}

QueryNode flatten(QueryNode node) {
  for (auto& c : node.children) c = flatten(std::move(c));
  if (node.op != QueryOp::conjunction && node.op != QueryOp::disjunction) return node;
  std::vector<QueryNode> merged;
  for (auto& c : node.children) {
    if (c.op == node.op) {
      for (auto& g : c.children) merged.push_back(std::move(g));
    } else {
      merged.push_back(std::move(c));
    }
  }
  node.children = std::move(merged);
  return node;
}

// ---------------------------------------------------------------------------
// Lexing and parsing

namespace {

enum class Tok { lparen, rparen, kw_and, kw_or, kw_not, bare, quoted, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool is_bare_stop(char c) {
  return c == '(' || c == ')' || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (true) {
    while (i < src.size() && (src[i] == ' ' || src[i] == '\t' || src[i] == '\n' || src[i] == '\r'))
      ++i;
    if (i >= src.size()) {
      out.push_back({Tok::end, {}, src.size()});
      return out;
    }
    const std::size_t start = i;
    const char c = src[i];
    if (c == '(' || c == ')') {
      out.push_back({c == '(' ? Tok::lparen : Tok::rparen, std::string(1, c), start});
      ++i;
    } else if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          text.push_back(src[i + 1]);
          i += 2;
        } else if (src[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          text.push_back(src[i++]);
        }
      }
      if (!closed)
        throw Error(ErrorCode::SyntaxError,
                    "unterminated quoted label starting at offset " + std::to_string(start),
                    {"\""}, static_cast<long>(start));
      out.push_back({Tok::quoted, std::move(text), start});
    } else {
      std::string text;
      bool escaped = false;
      while (i < src.size() && !is_bare_stop(src[i])) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          text.push_back(src[i + 1]);
          escaped = true;
          i += 2;
        } else {
          text.push_back(src[i++]);
        }
      }
      Tok kind = Tok::bare;
      if (!escaped) {
        if (iequals(text, "AND")) kind = Tok::kw_and;
        else if (iequals(text, "OR")) kind = Tok::kw_or;
        else if (iequals(text, "NOT")) kind = Tok::kw_not;
      }
      out.push_back({kind, std::move(text), start});
    }
  }
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::quoted: return "\"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

/// Concepts whose label equals `label` ignoring ASCII case. A direct scan:
/// most queries name concepts by id and never get here.
std::vector<std::size_t> lookup_label(const OntologyGraph& graph, std::string_view label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph.size(); ++i)
    if (iequals(graph.record(i).label, label)) out.push_back(i);
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const OntologyGraph& graph)
      : tokens_(lex(src)), graph_(graph) {}

  QueryNode parse() {
    QueryNode n = parse_or();
    if (peek().kind != Tok::end) fail({"AND", "OR", "end of input"});
    return flatten(std::move(n));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i)
      list += (i ? (i + 1 == expected.size() ? " or " : ", ") : "") + expected[i];
    throw Error(ErrorCode::SyntaxError,
                "offset " + std::to_string(t.pos) + ": expected " + list + ", found " + describe(t),
                std::move(expected), static_cast<long>(t.pos));
  }

  QueryNode parse_or() {
    std::vector<QueryNode> parts;
    parts.push_back(parse_and());
    while (peek().kind == Tok::kw_or) {
      advance();
      parts.push_back(parse_and());
    }
    return parts.size() == 1 ? std::move(parts.front()) : QueryNode::any_of(std::move(parts));
  }

  QueryNode parse_and() {
    std::vector<QueryNode> parts;
    parts.push_back(parse_unary());
    while (peek().kind == Tok::kw_and) {
      advance();
      parts.push_back(parse_unary());
    }
    return parts.size() == 1 ? std::move(parts.front()) : QueryNode::all_of(std::move(parts));
  }

  QueryNode parse_unary() {
    switch (peek().kind) {
      case Tok::kw_not:
        advance();
        return QueryNode::negation(parse_unary());
      case Tok::lparen: {
        advance();
        QueryNode inner = parse_or();
        if (peek().kind != Tok::rparen) fail({"')'", "AND", "OR"});
        advance();
        return inner;
      }
      case Tok::bare:
      case Tok::quoted:
        return resolve(advance());
      default:
        fail({"concept", "'('", "NOT"});
    }
  }

  QueryNode resolve(const Token& t) {
    if (t.kind == Tok::bare && graph_.contains(t.text)) return QueryNode::ref(t.text);
    auto matches = lookup_label(graph_, t.text);
    if (matches.size() == 1) return QueryNode::ref(graph_.record(matches.front()).id);
    if (matches.size() > 1) {
      std::vector<std::string> ids;
      for (std::size_t m : matches) ids.push_back(graph_.record(m).id);
      std::string list;
      for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
      throw Error(ErrorCode::AmbiguousLabel,
                  "label " + describe(t) + " matches several concepts: " + list, std::move(ids),
                  static_cast<long>(t.pos));
    }
    auto suggestions = suggest_concepts(graph_, t.text);
    std::string hint;
    if (!suggestions.empty()) {
      hint = "; did you mean ";
      for (std::size_t i = 0; i < suggestions.size(); ++i)
        hint += (i ? ", " : "") + suggestions[i];
      hint += "?";
    }
    throw Error(ErrorCode::UnknownConcept, "unknown concept " + describe(t) + hint,
                std::move(suggestions), static_cast<long>(t.pos));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const OntologyGraph& graph_;
};

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

QueryNode parse_expression(std::string_view text, const OntologyGraph& graph) {
  return Parser(text, graph).parse();
}

std::vector<std::string> suggest_concepts(const OntologyGraph& graph, std::string_view text,
                                          std::size_t limit) {
  const std::string needle = to_lower(text);
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> ranked;
  ranked.reserve(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    std::string label = to_lower(graph.record(i).label);
    ranked.emplace_back(edit_distance(needle, label), std::move(label), i);
  }
  const std::size_t take = std::min(limit, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                    ranked.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < take; ++i) {
    const auto& rec = graph.record(std::get<2>(ranked[i]));
    out.push_back(rec.id + " (" + rec.label + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

int precedence(QueryOp op) {
  switch (op) {
    case QueryOp::disjunction: return 1;
    case QueryOp::conjunction: return 2;
    case QueryOp::negation: return 3;
    case QueryOp::concept_ref: return 4;
  }
  return 4;
}

std::string format_atom(const std::string& id) {
  std::string out;
  const bool keyword = iequals(id, "AND") || iequals(id, "OR") || iequals(id, "NOT");
  for (std::size_t i = 0; i < id.size(); ++i) {
    const char c = id[i];
    if (is_bare_stop(c) || c == '\\' || (keyword && i == 0)) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

void format_into(const QueryNode& node, std::string& out) {
  auto child = [&](const QueryNode& c, int min_prec) {
    if (precedence(c.op) < min_prec) {
      out += '(';
      format_into(c, out);
      out += ')';
    } else {
      format_into(c, out);
    }
  };
  switch (node.op) {
    case QueryOp::concept_ref:
      out += format_atom(node.id);
      break;
    case QueryOp::negation:
      out += "NOT ";
      child(node.children.front(), precedence(QueryOp::negation));
      break;
    case QueryOp::conjunction:
    case QueryOp::disjunction: {
      const char* sep = node.op == QueryOp::conjunction ? " AND " : " OR ";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += sep;
        child(node.children[i], precedence(node.op));
      }
      break;
    }
  }
}

}  // namespace

std::string format_expression(const QueryNode& node) {
  std::string out;
  format_into(node, out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON AST

nlohmann::json to_json(const QueryNode& node) {
  nlohmann::json j;
  switch (node.op) {
    case QueryOp::concept_ref:
      j["op"] = "ref";
      j["id"] = node.id;
      return j;
    case QueryOp::conjunction: j["op"] = "and"; break;
    case QueryOp::disjunction: j["op"] = "or"; break;
    case QueryOp::negation: j["op"] = "not"; break;
  }
  j["children"] = nlohmann::json::array();
  for (const auto& c : node.children) j["children"].push_back(to_json(c));
  return j;
}

namespace {

QueryNode from_json_at(const nlohmann::json& j, const std::string& path, const OntologyGraph* graph) {
  auto schema = [&](const std::string& where, const std::string& what) {
    return Error(ErrorCode::SchemaError, where + ": " + what, {where});
  };
  if (!j.is_object()) throw schema(path, "expected an object");
  auto op = j.find("op");
  if (op == j.end() || !op->is_string()) throw schema(path + ".op", "expected a string");
  const std::string kind = op->get<std::string>();

  if (kind == "ref") {
    auto id = j.find("id");
    if (id == j.end() || !id->is_string() || id->get<std::string>().empty())
      throw schema(path + ".id", "expected a non-empty string");
    std::string cid = id->get<std::string>();
    if (graph && !graph->contains(cid)) {
      auto suggestions = suggest_concepts(*graph, cid);
      throw Error(ErrorCode::UnknownConcept, "unknown concept '" + cid + "' at " + path,
                  std::move(suggestions));
    }
    return QueryNode::ref(std::move(cid));
  }
  if (kind != "and" && kind != "or" && kind != "not")
    throw schema(path + ".op", "expected one of and, or, not, ref");

  auto children = j.find("children");
  if (children == j.end() || !children->is_array())
    throw schema(path + ".children", "expected an array");
  std::vector<QueryNode> parts;
  for (std::size_t i = 0; i < children->size(); ++i)
    parts.push_back(
        from_json_at((*children)[i], path + ".children[" + std::to_string(i) + "]", graph));

  if (kind == "not") {
    if (parts.size() != 1) throw schema(path + ".children", "NOT takes exactly one child");
    return QueryNode::negation(std::move(parts.front()));
  }
  if (parts.size() < 2) throw schema(path + ".children", "AND/OR need at least two children");
  return kind == "and" ? QueryNode::all_of(std::move(parts)) : QueryNode::any_of(std::move(parts));
}

}  // namespace

QueryNode query_from_json(const nlohmann::json& doc, const OntologyGraph* graph) {
  return from_json_at(doc, "$", graph);
}

// ---------------------------------------------------------------------------
// Evaluation

MembershipVector evaluate(const QueryNode& node, const EmbeddingMatrix& matrix,
                          const FuzzyConfig& config) {
  switch (node.op) {
    case QueryOp::concept_ref: {
      auto v = matrix.vector(node.id);
      return MembershipVector(v.begin(), v.end());
    }
    case QueryOp::negation:
      return elementwise(config, ElementwiseOp::negate, evaluate(node.children.at(0), matrix, config));
    case QueryOp::conjunction:
    case QueryOp::disjunction: {
      if (node.children.size() < 2)
        throw Error(ErrorCode::InvalidParams, "AND/OR need at least two operands");
      const auto op =
          node.op == QueryOp::conjunction ? ElementwiseOp::tnorm : ElementwiseOp::tconorm;
      MembershipVector acc = evaluate(node.children.front(), matrix, config);
      for (std::size_t i = 1; i < node.children.size(); ++i)
        elementwise_accumulate(config, op, acc, evaluate(node.children[i], matrix, config));
      return acc;
    }
  }
  return {};
}

QueryResult answer(const QueryNode& node, const VectorIndex& index, const FuzzyConfig& config,
                   std::size_t k) {
  auto vec = evaluate(node, index.matrix(), config);
  auto top = index.top_k(vec, k);
  return QueryResult{std::move(top.hits), top.zero_query, format_expression(node)};
}

}  // namespace fuzzyvis
