#include "fuzzyvis/alpha_embedding.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Scratch state for producing columns; one instance per worker thread.
class ColumnKernel {
 public:
  ColumnKernel(const OntologyGraph& graph, double alpha, Family family)
      : graph_(graph), family_(family), up_(graph.size(), kUnreached),
        best_(graph.size(), kUnreached) {
    // d never exceeds twice the longest path, which is < size()
    powers_.resize(2 * graph.size() + 1);
    for (std::size_t d = 0; d < powers_.size(); ++d)
      powers_[d] = std::pow(alpha, static_cast<double>(d));
  }

  // Fills out[i] for every leaf i with alpha^distance(anchor, i); internal
  // entries are left untouched.
  void leaf_degrees(std::size_t anchor, std::span<double> out) {
    // Upward BFS from the anchor: shortest edge count to each ancestor.
    touched_.clear();
    up_[anchor] = 0;
    touched_.push_back(anchor);
    for (std::size_t head = 0; head < touched_.size(); ++head) {
      std::size_t cur = touched_[head];
      for (std::size_t p : graph_.parent_indices(cur)) {
        if (up_[p] == kUnreached) {
          up_[p] = up_[cur] + 1;
          touched_.push_back(p);
        }
      }
    }
    // best[x] = min over common ancestors W of x and anchor of
    //           up(anchor, W) + up(x, W), computed parents-first.
    for (std::size_t x : graph_.topological_order()) {
      std::size_t best = up_[x];
      for (std::size_t p : graph_.parent_indices(x))
        if (best_[p] != kUnreached && best_[p] + 1 < best) best = best_[p] + 1;
      best_[x] = best;
    }
    for (std::size_t leaf : graph_.leaf_indices())
      out[leaf] = best_[leaf] == kUnreached ? 0.0 : powers_[best_[leaf]];
    for (std::size_t t : touched_) up_[t] = kUnreached;
  }

  void lift(std::span<double> col) const { lift_internal_indexed(graph_, family_, col); }

  static void lift_internal_indexed(const OntologyGraph& graph, Family family,
                                    std::span<double> col) {
    auto order = graph.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto kids = graph.child_indices(*it);
      if (kids.empty()) continue;
      double acc = col[kids[0]];
      for (std::size_t k = 1; k < kids.size(); ++k) acc = ops::tconorm(family, acc, col[kids[k]]);
      col[*it] = acc;
    }
  }

 private:
  const OntologyGraph& graph_;
  Family family_;
  std::vector<double> powers_;
  std::vector<std::size_t> up_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> touched_;
};

}  // namespace

void AlphaParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidParams, "alpha must lie strictly inside (0, 1), got " +
                                              format_double(alpha));
  if (dim < 1) throw Error(ErrorCode::InvalidParams, "dim must be >= 1");
}

ColumnStream::ColumnStream(std::uint64_t seed, std::uint64_t column)
    : key_(mix64(seed ^ mix64(column))) {}

std::uint64_t ColumnStream::next() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

std::uint64_t ColumnStream::below(std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

std::size_t anchor_for_column(const OntologyGraph& graph, std::uint64_t seed, std::uint64_t column) {
  const auto leaves = graph.leaf_indices().size();
  if (leaves == 0) throw Error(ErrorCode::NoLeaves, "ontology has no leaf concepts");
  ColumnStream stream(seed, column);
  return static_cast<std::size_t>(stream.below(leaves));
}

std::map<ConceptId, double> anchor_memberships(const OntologyGraph& graph,
                                               std::string_view anchor_leaf, double alpha) {
  const std::size_t anchor = graph.require_index(anchor_leaf);
  if (!graph.is_leaf(anchor))
    throw Error(ErrorCode::NotALeaf, "anchor '" + std::string(anchor_leaf) + "' is not a leaf",
                {std::string(anchor_leaf)});
  AlphaParams{alpha, 1, 0}.validate();

  std::vector<double> col(graph.size(), 0.0);
  ColumnKernel kernel(graph, alpha, Family::product);
  kernel.leaf_degrees(anchor, col);

  std::map<ConceptId, double> out;
  for (std::size_t leaf : graph.leaf_indices()) out.emplace(graph.record(leaf).id, col[leaf]);
  return out;
}

std::map<ConceptId, double> lift_internal(const OntologyGraph& graph,
                                          const std::map<ConceptId, double>& leaf_degrees,
                                          const FuzzyConfig& config) {
  std::vector<double> col(graph.size(), 0.0);
  for (std::size_t leaf : graph.leaf_indices()) {
    const auto& id = graph.record(leaf).id;
    auto it = leaf_degrees.find(id);
    if (it == leaf_degrees.end())
      throw Error(ErrorCode::InvalidParams, "no degree supplied for leaf '" + id + "'", {id});
    col[leaf] = Degree(it->second);
  }
  ColumnKernel::lift_internal_indexed(graph, config.family, col);

  std::map<ConceptId, double> out;
  for (std::size_t i = 0; i < graph.size(); ++i) out.emplace(graph.record(i).id, col[i]);
  return out;
}

std::vector<double> generate_column(const OntologyGraph& graph, double alpha, std::uint64_t seed,
                                    std::uint64_t column, const FuzzyConfig& config) {
  AlphaParams{alpha, 1, seed}.validate();
  const std::size_t anchor = graph.leaf_indices()[anchor_for_column(graph, seed, column)];
  std::vector<double> col(graph.size(), 0.0);
  ColumnKernel kernel(graph, alpha, config.family);
  kernel.leaf_degrees(anchor, col);
  kernel.lift(col);
  return col;
}

EmbeddingMatrix generate(const OntologyGraph& graph, const AlphaParams& params,
                         const FuzzyConfig& config, unsigned threads) {
  params.validate();
  if (graph.leaf_indices().empty())
    throw Error(ErrorCode::NoLeaves, "ontology has no leaf concepts");

  const std::size_t n = graph.size();
  const std::size_t dim = params.dim;
  std::vector<double> data(n * dim, 0.0);

  auto work = [&](std::size_t first, std::size_t last) {
    ColumnKernel kernel(graph, params.alpha, config.family);
    std::vector<double> col(n, 0.0);
    for (std::size_t c = first; c < last; ++c) {
      const std::size_t anchor = graph.leaf_indices()[anchor_for_column(graph, params.seed, c)];
      kernel.leaf_degrees(anchor, col);
      kernel.lift(col);
      for (std::size_t r = 0; r < n; ++r) data[r * dim + c] = col[r];
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, dim));
  if (threads <= 1) {
    work(0, dim);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (dim + threads - 1) / threads;
    for (std::size_t first = 0; first < dim; first += chunk)
      pool.emplace_back(work, first, std::min(dim, first + chunk));
  }

  std::vector<ConceptId> ids;
  ids.reserve(n);
  for (const auto& rec : graph.records()) ids.push_back(rec.id);
  Provenance prov{EmbeddingSource::generated, config.family, params.alpha, params.seed};
  return EmbeddingMatrix::from_dense(dim, std::move(ids), std::move(data), prov);
}

}  // namespace fuzzyvis
