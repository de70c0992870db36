#include "fuzzyvis/ontology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

namespace {

void sort_unique(std::vector<ConceptId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

// Nodes left over by Kahn's algorithm each keep at least one unprocessed
// parent, so walking parent links from any of them must close a loop.
std::vector<ConceptId> find_cycle(const std::vector<ConceptRecord>& records,
                                  const std::vector<std::vector<std::size_t>>& parents,
                                  const std::vector<std::size_t>& pending) {
  std::size_t start = records.size();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (pending[i] > 0) {
      start = i;
      break;
    }
  }
  std::vector<long> seen_at(records.size(), -1);
  std::vector<std::size_t> walk;
  std::size_t cur = start;
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<long>(walk.size());
    walk.push_back(cur);
    for (std::size_t p : parents[cur]) {
      if (pending[p] > 0) {
        cur = p;
        break;
      }
    }
  }
  std::vector<ConceptId> cycle;
  for (auto i = static_cast<std::size_t>(seen_at[cur]); i < walk.size(); ++i)
    cycle.push_back(records[walk[i]].id);
  std::sort(cycle.begin(), cycle.end());
  return cycle;
}

}  // namespace

OntologyGraph OntologyGraph::build(std::vector<ConceptRecord> records) {
  OntologyGraph g;
  std::sort(records.begin(), records.end(),
            [](const ConceptRecord& a, const ConceptRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id.empty()) throw Error(ErrorCode::MissingId, "concept with empty id");
    if (i > 0 && records[i].id == records[i - 1].id)
      throw Error(ErrorCode::DuplicateId, "duplicate concept id '" + records[i].id + "'",
                  {records[i].id});
  }

  const std::size_t n = records.size();
  g.lookup_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.lookup_.emplace(records[i].id, i);

  g.parents_.assign(n, {});
  g.children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    auto& rec = records[i];
    sort_unique(rec.parents);
    rec.children.clear();
    for (const auto& pid : rec.parents) {
      auto it = g.lookup_.find(pid);
      if (it == g.lookup_.end())
        throw Error(ErrorCode::DanglingParent,
                    "concept '" + rec.id + "' names undeclared parent '" + pid + "'", {pid, rec.id});
      g.parents_[i].push_back(it->second);
      g.children_[it->second].push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Children were appended in ascending child index, i.e. id order.
    for (std::size_t c : g.children_[i]) records[i].children.push_back(records[c].id);
  }

  std::vector<std::size_t> pending(n);
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = g.parents_[i].size();
    if (pending[i] == 0) ready.push_back(i);
  }
  g.topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t cur = ready.front();
    ready.pop_front();
    g.topo_.push_back(cur);
    for (std::size_t c : g.children_[cur])
      if (--pending[c] == 0) ready.push_back(c);
  }
  if (g.topo_.size() != n) {
    auto cycle = find_cycle(records, g.parents_, pending);
    std::string names;
    for (const auto& id : cycle) names += (names.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::CycleDetected, "is_a cycle through {" + names + "}", std::move(cycle));
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (g.parents_[i].empty()) g.roots_.push_back(i);
    if (g.children_[i].empty()) g.leaves_.push_back(i);
  }
  g.records_ = std::move(records);
  return g;
}

std::optional<std::size_t> OntologyGraph::index_of(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const ConceptRecord* OntologyGraph::find(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &records_[*idx] : nullptr;
}

std::size_t OntologyGraph::require_index(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx)
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + std::string(id) + "'",
                {std::string(id)});
  return *idx;
}

const ConceptRecord& OntologyGraph::at(std::string_view id) const {
  return records_[require_index(id)];
}

std::vector<ConceptId> OntologyGraph::roots() const {
  std::vector<ConceptId> out;
  for (std::size_t i : roots_) out.push_back(records_[i].id);
  return out;
}

std::vector<ConceptId> OntologyGraph::leaves() const {
  std::vector<ConceptId> out;
  for (std::size_t i : leaves_) out.push_back(records_[i].id);
  return out;
}

MetadataTable compute_metadata(const OntologyGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<ConceptMetadata> rows(n);

  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(n, unset);
  std::deque<std::size_t> frontier;
  for (std::size_t r : graph.root_indices()) {
    depth[r] = 0;
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    for (std::size_t c : graph.child_indices(cur)) {
      if (depth[c] == unset) {
        depth[c] = depth[cur] + 1;
        frontier.push_back(c);
      }
    }
  }

  std::vector<std::size_t> stamp(n, unset);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    stack.assign(1, i);
    stamp[i] = i;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      ++count;
      for (std::size_t c : graph.child_indices(cur)) {
        if (stamp[c] != i) {
          stamp[c] = i;
          stack.push_back(c);
        }
      }
    }
    rows[i].depth = depth[i];
    rows[i].subtree_size = count;
    rows[i].child_count = graph.child_indices(i).size();
    rows[i].is_leaf = rows[i].child_count == 0;
  }
  return MetadataTable(std::move(rows), graph);
}

std::vector<ConceptId> search_labels(const OntologyGraph& graph, std::string_view query,
                                     std::size_t limit) {
  const std::string needle = to_lower(trim(query));
  if (needle.empty()) throw Error(ErrorCode::EmptyQuery, "search query is empty");

  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> hits;  // pos, len, index
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& label = graph.record(i).label;
    auto pos = to_lower(label).find(needle);
    if (pos != std::string::npos) hits.emplace_back(pos, label.size(), i);
  }
  // Index order equals id order, so the tuple comparison is the full ranking.
  std::sort(hits.begin(), hits.end());
  if (hits.size() > limit) hits.resize(limit);

  std::vector<ConceptId> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(graph.record(std::get<2>(h)).id);
  return out;
}

OntologyGraph neighborhood(const OntologyGraph& graph, std::string_view id, std::size_t depth) {
  const std::size_t center = graph.require_index(id);
  std::vector<char> keep(graph.size(), 0);

  std::vector<std::size_t> layer{center};
  keep[center] = 1;
  for (std::size_t d = 0; d < depth && !layer.empty(); ++d) {
    std::vector<std::size_t> next;
    for (std::size_t cur : layer)
      for (std::size_t c : graph.child_indices(cur))
        if (!keep[c]) {
          keep[c] = 1;
          next.push_back(c);
        }
    layer = std::move(next);
  }
  for (const auto& [anc, dist] : ancestor_distances(graph, center)) keep[anc] = 1;

  std::vector<ConceptRecord> records;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!keep[i]) continue;
    ConceptRecord rec = graph.record(i);
    rec.children.clear();
    std::erase_if(rec.parents, [&](const ConceptId& p) { return !keep[*graph.index_of(p)]; });
    records.push_back(std::move(rec));
  }
  return OntologyGraph::build(std::move(records));
}

std::unordered_map<std::size_t, std::size_t> ancestor_distances(const OntologyGraph& graph,
                                                                std::size_t index) {
  std::unordered_map<std::size_t, std::size_t> dist{{index, 0}};
  std::deque<std::size_t> frontier{index};
  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    for (std::size_t p : graph.parent_indices(cur)) {
      if (dist.emplace(p, dist[cur] + 1).second) frontier.push_back(p);
    }
  }
  return dist;
}

std::size_t leaf_distance(const OntologyGraph& graph, std::string_view a, std::string_view b) {
  const std::size_t ia = graph.require_index(a);
  const std::size_t ib = graph.require_index(b);
  for (std::size_t i : {ia, ib})
    if (!graph.is_leaf(i))
      throw Error(ErrorCode::NotALeaf, "concept '" + graph.record(i).id + "' is not a leaf",
                  {graph.record(i).id});
  if (ia == ib) return 0;

  const auto up_a = ancestor_distances(graph, ia);
  const auto up_b = ancestor_distances(graph, ib);
  std::optional<std::size_t> best;
  for (const auto& [anc, da] : up_a) {
    auto it = up_b.find(anc);
    if (it != up_b.end() && (!best || da + it->second < *best)) best = da + it->second;
  }
  if (!best)
    throw Error(ErrorCode::NoCommonAncestor,
                "'" + std::string(a) + "' and '" + std::string(b) + "' share no ancestor",
                {std::string(a), std::string(b)});
  return *best;
}

}  // namespace fuzzyvis
