#include "fuzzyvis/service.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fuzzyvis/query.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidParams, "cannot read '" + path.string() + "'", {path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::InvalidParams, "cannot write '" + path.string() + "'", {path.string()});
}

json summary(const Instance& inst, std::size_t index) {
  const auto& rec = inst.graph().record(index);
  const auto& meta = inst.ontology->metadata[index];
  return {{"id", rec.id},
          {"label", rec.label},
          {"depth", meta.depth},
          {"subtree_size", meta.subtree_size},
          {"child_count", meta.child_count},
          {"is_leaf", meta.is_leaf}};
}

json embedding_info(const Instance& inst) {
  if (!inst.matrix) return nullptr;
  const auto& prov = inst.matrix->provenance();
  json out{{"dim", inst.matrix->dim()},
           {"rows", inst.matrix->size()},
           {"source", prov.source == EmbeddingSource::generated ? "generated" : "imported"},
           {"family", to_string(prov.family)}};
  if (prov.alpha) out["alpha"] = *prov.alpha;
  if (prov.seed) out["seed"] = *prov.seed;
  return out;
}

const std::string* string_field(const json& body, const char* key, bool required) {
  auto it = body.find(key);
  if (it == body.end()) {
    if (required)
      throw Error(ErrorCode::InvalidParams, std::string("missing field '") + key + "'", {std::string("$.") + key});
    return nullptr;
  }
  if (!it->is_string())
    throw Error(ErrorCode::InvalidParams, std::string("field '") + key + "' must be a string",
                {std::string("$.") + key});
  return it->get_ptr<const std::string*>();
}

AlphaParams generate_params(const json& spec) {
  if (!spec.is_object())
    throw Error(ErrorCode::InvalidParams, "'generate' must be an object", {"$.embedding.generate"});
  AlphaParams p;
  if (auto it = spec.find("alpha"); it != spec.end()) {
    if (!it->is_number())
      throw Error(ErrorCode::InvalidParams, "alpha must be a number", {"$.embedding.generate.alpha"});
    p.alpha = it->get<double>();
  }
  if (auto it = spec.find("dim"); it != spec.end()) {
    if (!it->is_number_unsigned())
      throw Error(ErrorCode::InvalidParams, "dim must be a positive integer", {"$.embedding.generate.dim"});
    p.dim = it->get<std::size_t>();
  }
  if (auto it = spec.find("seed"); it != spec.end()) {
    if (!it->is_number_unsigned())
      throw Error(ErrorCode::InvalidParams, "seed must be a non-negative integer",
                  {"$.embedding.generate.seed"});
    p.seed = it->get<std::uint64_t>();
  }
  p.validate();
  return p;
}

}  // namespace

std::shared_ptr<const LoadedOntology> LoadedOntology::make(OntologyGraph graph) {
  auto out = std::make_shared<LoadedOntology>();
  out->graph = std::move(graph);
  out->metadata = compute_metadata(out->graph);
  return out;
}

std::string to_string(JobState state) {
  switch (state) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
  }
  return "unknown";
}

OntologyFormat parse_format(std::string_view token) {
  const auto t = to_lower(token);
  if (t == "obo") return OntologyFormat::obo;
  if (t == "json") return OntologyFormat::json;
  throw Error(ErrorCode::UnsupportedFormat, "unsupported ontology format '" + std::string(token) + "'",
              {std::string(token)});
}

OntologyGraph parse_ontology(std::string_view text, OntologyFormat format) {
  return format == OntologyFormat::obo ? parse_obo(text) : parse_json(text);
}

CreateRequest CreateRequest::from_json(const json& body) {
  if (!body.is_object()) throw Error(ErrorCode::InvalidParams, "request body must be a JSON object", {"$"});
  CreateRequest req;
  if (auto* name = string_field(body, "name", false)) req.name = *name;
  req.ontology_text = *string_field(body, "ontology", true);
  if (auto* fmt = string_field(body, "format", false)) req.format = parse_format(*fmt);
  if (auto* fam = string_field(body, "family", false)) req.config.family = parse_family(*fam);

  auto emb = body.find("embedding");
  if (emb == body.end() || emb->is_null()) return req;
  if (!emb->is_object()) throw Error(ErrorCode::InvalidParams, "'embedding' must be an object", {"$.embedding"});
  const bool upload = emb->contains("upload"), gen = emb->contains("generate");
  if (upload == gen)
    throw Error(ErrorCode::InvalidParams, "'embedding' needs exactly one of 'upload' or 'generate'",
                {"$.embedding"});
  if (upload) {
    if (!(*emb)["upload"].is_string())
      throw Error(ErrorCode::InvalidParams, "'upload' must hold the embedding file text",
                  {"$.embedding.upload"});
    req.embedding_text = (*emb)["upload"].get<std::string>();
  } else {
    req.generate = generate_params((*emb)["generate"]);
  }
  return req;
}

Service::Service(unsigned generation_threads) : generation_threads_(generation_threads) {}

Service::~Service() {
  // jthread members join on destruction; clear explicitly so the
  // remaining members are still alive while jobs finish.
  std::vector<std::jthread> workers;
  {
    std::lock_guard lock(jobs_mutex_);
    workers.swap(workers_);
  }
  workers.clear();
}

void Service::publish(std::shared_ptr<const Instance> inst) {
  std::unique_lock lock(instances_mutex_);
  instances_[inst->id] = std::move(inst);
}

void Service::set_job(const std::string& job_id, JobState state, std::string detail) {
  {
    std::lock_guard lock(jobs_mutex_);
    auto& j = jobs_.at(job_id);
    if (j.terminal()) return;
    j.state = state;
    j.detail = std::move(detail);
  }
  jobs_cv_.notify_all();
}

CreateResult Service::create_instance(const CreateRequest& request) {
  if (request.embedding_text && request.generate)
    throw Error(ErrorCode::InvalidParams, "choose either an uploaded or a generated embedding");
  if (request.generate) request.generate->validate();

  auto inst = std::make_shared<Instance>();
  inst->ontology = LoadedOntology::make(parse_ontology(request.ontology_text, request.format));
  inst->config = request.config;

  CreateResult result;
  if (request.embedding_text) {
    auto imported = import_embedding(*request.embedding_text, &inst->graph());
    result.warnings = std::move(imported.warnings);
    if (imported.matrix.size() > 0) {
      inst->matrix = std::make_shared<const EmbeddingMatrix>(std::move(imported.matrix));
      inst->index = std::make_shared<const VectorIndex>(inst->matrix);
    }
  }
  if (request.generate && inst->graph().leaf_indices().empty())
    throw Error(ErrorCode::NoLeaves, "ontology has no leaf concepts to anchor on");

  {
    std::unique_lock lock(instances_mutex_);
    inst->id = "inst-" + std::to_string(next_instance_++);
    inst->name = request.name.empty() ? inst->id : request.name;
    result.instance_id = inst->id;
    instances_[inst->id] = inst;
  }
  if (!request.generate) return result;

  std::lock_guard lock(jobs_mutex_);
  JobStatus status{"job-" + std::to_string(next_job_++), inst->id, JobState::queued, ""};
  jobs_[status.job_id] = status;
  result.job = status;
  workers_.emplace_back([this, base = std::shared_ptr<const Instance>(inst), params = *request.generate,
                         job_id = status.job_id] {
    set_job(job_id, JobState::running, "");
    try {
      auto matrix = std::make_shared<const EmbeddingMatrix>(
          generate(base->graph(), params, base->config, generation_threads_));
      auto next = std::make_shared<Instance>(*base);
      next->matrix = matrix;
      next->index = std::make_shared<const VectorIndex>(matrix);
      publish(std::move(next));
      set_job(job_id, JobState::done,
              "generated " + std::to_string(matrix->size()) + " vectors of dim " + std::to_string(matrix->dim()));
    } catch (const std::exception& e) {
      set_job(job_id, JobState::failed, e.what());
    }
  });
  return result;
}

std::shared_ptr<const Instance> Service::instance(std::string_view instance_id) const {
  std::shared_lock lock(instances_mutex_);
  auto it = instances_.find(std::string(instance_id));
  if (it == instances_.end())
    throw Error(ErrorCode::UnknownInstance, "unknown instance '" + std::string(instance_id) + "'",
                {std::string(instance_id)});
  return it->second;
}

std::vector<std::shared_ptr<const Instance>> Service::instances() const {
  std::shared_lock lock(instances_mutex_);
  std::vector<std::shared_ptr<const Instance>> out;
  for (const auto& [_, inst] : instances_) out.push_back(inst);
  return out;
}

JobStatus Service::job(std::string_view job_id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(std::string(job_id));
  if (it == jobs_.end())
    throw Error(ErrorCode::UnknownJob, "unknown job '" + std::string(job_id) + "'", {std::string(job_id)});
  return it->second;
}

JobStatus Service::wait(std::string_view job_id) const {
  std::unique_lock lock(jobs_mutex_);
  auto it = jobs_.find(std::string(job_id));
  if (it == jobs_.end())
    throw Error(ErrorCode::UnknownJob, "unknown job '" + std::string(job_id) + "'", {std::string(job_id)});
  jobs_cv_.wait(lock, [&] { return it->second.terminal(); });
  return it->second;
}

json Service::list_json() const {
  json out = json::array();
  for (const auto& inst : instances()) {
    out.push_back({{"instance_id", inst->id},
                   {"name", inst->name},
                   {"family", to_string(inst->config.family)},
                   {"concepts", inst->graph().size()},
                   {"roots", inst->graph().roots()},
                   {"leaves", inst->graph().leaf_indices().size()},
                   {"embedding", embedding_info(*inst)}});
  }
  // Registry order is lexicographic; present creation order instead.
  std::sort(out.begin(), out.end(), [](const json& a, const json& b) {
    const auto& x = a["instance_id"].get_ref<const std::string&>();
    const auto& y = b["instance_id"].get_ref<const std::string&>();
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return {{"instances", out}};
}

json Service::concept_json(std::string_view instance_id, std::string_view concept_id) const {
  auto inst = instance(instance_id);
  const auto index = inst->graph().require_index(concept_id);
  const auto& rec = inst->graph().record(index);
  const auto& meta = inst->ontology->metadata[index];
  json out{{"id", rec.id},
           {"label", rec.label},
           {"definition", rec.definition ? json(*rec.definition) : json(nullptr)},
           {"parents", rec.parents},
           {"children", rec.children},
           {"metadata",
            {{"depth", meta.depth},
             {"subtree_size", meta.subtree_size},
             {"child_count", meta.child_count},
             {"is_leaf", meta.is_leaf}}},
           {"has_embedding", inst->matrix && inst->matrix->contains(rec.id)}};
  return out;
}

json Service::search_json(std::string_view instance_id, std::string_view q, std::size_t limit) const {
  if (limit == 0) throw Error(ErrorCode::InvalidParams, "limit must be >= 1");
  auto inst = instance(instance_id);
  json hits = json::array();
  for (const auto& id : search_labels(inst->graph(), q, limit))
    hits.push_back(summary(*inst, *inst->graph().index_of(id)));
  return {{"query", std::string(q)}, {"hits", hits}};
}

json Service::neighborhood_json(std::string_view instance_id, std::string_view concept_id,
                                std::size_t depth) const {
  auto inst = instance(instance_id);
  const auto& g = inst->graph();
  const auto focus = g.require_index(concept_id);
  auto sub = neighborhood(g, concept_id, depth);

  auto ancestors = ancestor_distances(g, focus);
  std::unordered_map<std::size_t, std::size_t> below{{focus, 0}};
  std::deque<std::size_t> frontier{focus};
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    if (below[v] == depth) continue;
    for (auto c : g.child_indices(v))
      if (below.emplace(c, below[v] + 1).second) frontier.push_back(c);
  }

  json nodes = json::array(), edges = json::array();
  for (const auto& rec : sub.records()) {
    const auto index = *g.index_of(rec.id);
    json node = summary(*inst, index);
    if (index == focus) {
      node["relation"] = "focus";
      node["distance"] = 0;
    } else if (auto it = below.find(index); it != below.end()) {
      node["relation"] = "descendant";
      node["distance"] = it->second;
    } else {
      node["relation"] = "ancestor";
      node["distance"] = ancestors.at(index);
    }
    node["has_embedding"] = inst->matrix && inst->matrix->contains(rec.id);
    nodes.push_back(std::move(node));
    for (const auto& p : rec.parents) edges.push_back({{"parent", p}, {"child", rec.id}});
  }
  return {{"focus", std::string(concept_id)}, {"depth", depth}, {"nodes", nodes}, {"edges", edges}};
}

json Service::query_json(std::string_view instance_id, const json& body, std::size_t k,
                         std::optional<Family> family) const {
  if (k == 0) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
  k = std::min(k, kMaxQueryK);
  if (!body.is_object()) throw Error(ErrorCode::InvalidParams, "request body must be a JSON object", {"$"});
  const bool has_expr = body.contains("expr"), has_ast = body.contains("ast");
  if (has_expr == has_ast)
    throw Error(ErrorCode::InvalidParams, "body needs exactly one of 'expr' or 'ast'", {"$"});

  auto inst = instance(instance_id);
  QueryNode node;
  if (has_expr) {
    if (!body["expr"].is_string())
      throw Error(ErrorCode::InvalidParams, "'expr' must be a string", {"$.expr"});
    node = parse_expression(body["expr"].get_ref<const std::string&>(), inst->graph());
  } else {
    node = flatten(query_from_json(body["ast"], &inst->graph()));
  }
  if (!inst->index)
    throw Error(ErrorCode::NoEmbedding, "instance '" + inst->id + "' has no embedding yet", {inst->id});

  const FuzzyConfig config = family ? FuzzyConfig{*family} : inst->config;
  auto result = answer(node, *inst->index, config, k);
  json hits = json::array();
  for (std::size_t rank = 0; rank < result.hits.size(); ++rank) {
    const auto& h = result.hits[rank];
    json hit = summary(*inst, *inst->graph().index_of(h.concept_id));
    hit["score"] = h.score;
    hit["rank"] = rank + 1;
    hits.push_back(std::move(hit));
  }
  return {{"echo", result.echo},
          {"ast", to_json(node)},
          {"family", to_string(config.family)},
          {"k", k},
          {"zero_query", result.zero_query},
          {"hits", hits}};
}

void Service::snapshot(std::string_view instance_id, const std::filesystem::path& dir) const {
  auto inst = instance(instance_id);
  std::filesystem::create_directories(dir);
  write_text(dir / "ontology.json", to_json_text(inst->graph()));
  if (inst->matrix) write_text(dir / "embedding.tsv", export_embedding(*inst->matrix));
  json meta{{"name", inst->name}, {"family", to_string(inst->config.family)}};
  write_text(dir / "instance.json", meta.dump(2) + "\n");
}

std::string Service::restore(const std::filesystem::path& dir) {
  const auto meta = json::parse(read_text(dir / "instance.json"));
  CreateRequest req;
  req.name = meta.value("name", "");
  req.config.family = parse_family(meta.value("family", "product"));
  req.format = OntologyFormat::json;
  req.ontology_text = read_text(dir / "ontology.json");
  if (std::filesystem::exists(dir / "embedding.tsv")) req.embedding_text = read_text(dir / "embedding.tsv");
  return create_instance(req).instance_id;
}

json error_json(const Error& error) {
  json body{{"code", to_string(error.code())}, {"message", error.what()}, {"details", error.details()}};
  if (error.position() >= 0) body["position"] = error.position();
  return {{"error", body}};
}

int http_status(ErrorCode code, bool concept_route) {
  switch (code) {
    case ErrorCode::UnknownInstance:
    case ErrorCode::UnknownJob: return 404;
    case ErrorCode::UnknownConcept: return concept_route ? 404 : 422;
    case ErrorCode::EmptyQuery:
    case ErrorCode::InvalidParams:
    case ErrorCode::UnsupportedFormat: return 400;
    case ErrorCode::NoEmbedding: return 409;
    default: return 422;
  }
}

}  // namespace fuzzyvis
