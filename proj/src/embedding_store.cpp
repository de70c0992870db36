#include "fuzzyvis/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

namespace {

constexpr double kClampTolerance = 1e-6;
constexpr std::string_view kMagic = "#fuzzyvis-embedding";

// Plain left-to-right summation. Mathematically tied cosines (proportional
// vectors) are then ranked exactly as a naive scan ranks them.
double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u.size(), v.size());
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot(u, v) / (nu * nv);
}

VectorIndex::VectorIndex(std::shared_ptr<const EmbeddingMatrix> matrix)
    : matrix_(std::move(matrix)) {
  if (!matrix_ || matrix_->empty())
    throw Error(ErrorCode::EmptyMatrix, "cannot index an empty embedding matrix");
  norms_.resize(matrix_->size());
  for (std::size_t i = 0; i < norms_.size(); ++i) {
    auto row = matrix_->row(i);
    norms_[i] = std::sqrt(dot(row, row));
  }
}

TopK VectorIndex::top_k(std::span<const double> query, std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
  if (size() == 0) throw Error(ErrorCode::EmptyIndex, "index is empty");
  require_same_dim(query.size(), dim());

  TopK result;
  const double qn = std::sqrt(dot(query, query));
  result.zero_query = qn == 0.0;

  std::vector<double> scores(size(), 0.0);
  if (!result.zero_query) {
    for (std::size_t i = 0; i < size(); ++i)
      if (norms_[i] != 0.0) scores[i] = dot(query, vector(i)) / (qn * norms_[i]);
  }

  // Entries are in id order, so comparing entry positions breaks ties by id.
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  result.hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) result.hits.push_back({id(order[i]), scores[order[i]]});
  return result;
}

ImportResult import_embedding(std::string_view text, const OntologyGraph* graph) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos >= text.size()) return false;
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    out = text.substr(pos, eol - pos);
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    return true;
  };

  std::string_view header;
  if (!next_line(header) || !header.starts_with(kMagic))
    throw Error(ErrorCode::HeaderMissing, "missing '#fuzzyvis-embedding v1' header line");

  Provenance prov;
  prov.source = EmbeddingSource::imported;
  std::optional<std::size_t> dim;
  bool versioned = false;
  std::istringstream tokens{std::string(header.substr(kMagic.size()))};
  for (std::string tok; tokens >> tok;) {
    if (tok == "v1") {
      versioned = true;
      continue;
    }
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    try {
      if (key == "dim") {
        dim = std::stoull(value);
      } else if (key == "source") {
        if (value == "generated") prov.source = EmbeddingSource::generated;
        else if (value == "imported") prov.source = EmbeddingSource::imported;
        else throw Error(ErrorCode::HeaderMissing, "unknown source '" + value + "'");
      } else if (key == "alpha") {
        prov.alpha = std::stod(value);
      } else if (key == "seed") {
        prov.seed = std::stoull(value);
      } else if (key == "family") {
        prov.family = parse_family(value);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::HeaderMissing, "malformed header value '" + tok + "'", {tok});
    }
  }
  if (!versioned) throw Error(ErrorCode::HeaderMissing, "header lacks version tag v1");
  if (!dim || *dim == 0) throw Error(ErrorCode::HeaderMissing, "header lacks a positive dim=");

  ImportResult result;
  std::vector<std::pair<ConceptId, MembershipVector>> rows;
  for (std::string_view line; next_line(line);) {
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0)
      throw Error(ErrorCode::SchemaError, where + ": expected '<id>\\t<values>'", {where});
    ConceptId id(line.substr(0, tab));
    std::string_view rest = line.substr(tab + 1);

    MembershipVector values;
    values.reserve(*dim);
    while (true) {
      auto comma = rest.find(',');
      std::string_view field = trim(rest.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw Error(ErrorCode::ValueOutOfRange,
                    where + ": '" + std::string(field) + "' is not a number", {where, id});
      if (!(v >= -kClampTolerance && v <= 1.0 + kClampTolerance))
        throw Error(ErrorCode::ValueOutOfRange,
                    where + ": value " + format_double(v) + " outside [0, 1]", {where, id});
      if (v < 0.0 || v > 1.0) {
        result.warnings.push_back(where + ": clamped " + format_double(v) + " for '" + id + "'");
        v = std::clamp(v, 0.0, 1.0);
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (values.size() != *dim)
      throw Error(ErrorCode::DimMismatchAcrossRows,
                  where + ": " + std::to_string(values.size()) + " values, header says dim=" +
                      std::to_string(*dim),
                  {where, id});
    if (graph && !graph->contains(id)) {
      result.warnings.push_back(where + ": unknown concept '" + id + "' dropped");
      result.unknown_concepts.push_back(id);
      continue;
    }
    rows.emplace_back(std::move(id), std::move(values));
  }
  result.matrix = EmbeddingMatrix::from_rows(*dim, std::move(rows), prov);
  return result;
}

void export_embedding(const EmbeddingMatrix& matrix, std::ostream& sink) {
  const auto& prov = matrix.provenance();
  sink << kMagic << " v1 dim=" << matrix.dim()
       << " source=" << (prov.source == EmbeddingSource::generated ? "generated" : "imported");
  if (prov.alpha) sink << " alpha=" << format_double(*prov.alpha);
  if (prov.seed) sink << " seed=" << *prov.seed;
  sink << " family=" << to_string(prov.family) << '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    sink << matrix.id(r) << '\t';
    auto row = matrix.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) sink << ',';
      sink << format_double(row[c]);
    }
    sink << '\n';
  }
}

std::string export_embedding(const EmbeddingMatrix& matrix) {
  std::ostringstream out;
  export_embedding(matrix, out);
  return out.str();
}

}  // namespace fuzzyvis
