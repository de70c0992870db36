#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyvis/alpha_embedding.hpp"
#include "fuzzyvis/embedding.hpp"
#include "fuzzyvis/embedding_store.hpp"
#include "fuzzyvis/error.hpp"
#include "fuzzyvis/fuzzy.hpp"
#include "fuzzyvis/ontology.hpp"

namespace fuzzyvis {

/// A parsed graph and its metadata, kept together so the metadata's graph
/// pointer stays valid when instances are republished.
struct LoadedOntology {
  OntologyGraph graph;
  MetadataTable metadata;

  static std::shared_ptr<const LoadedOntology> make(OntologyGraph graph);
};

/// Published instances are never mutated; attaching an embedding publishes
/// a fresh Instance under the same id.
struct Instance {
  std::string id;
  std::string name;
  std::shared_ptr<const LoadedOntology> ontology;
  FuzzyConfig config;
  std::shared_ptr<const EmbeddingMatrix> matrix;
  std::shared_ptr<const VectorIndex> index;

  const OntologyGraph& graph() const { return ontology->graph; }
};

enum class JobState { queued, running, done, failed };
std::string to_string(JobState state);

struct JobStatus {
  std::string job_id;
  std::string instance_id;
  JobState state = JobState::queued;
  std::string detail;

  bool terminal() const { return state == JobState::done || state == JobState::failed; }
};

enum class OntologyFormat { obo, json };
/// Throws UnsupportedFormat.
OntologyFormat parse_format(std::string_view token);
OntologyGraph parse_ontology(std::string_view text, OntologyFormat format);

struct CreateRequest {
  std::string name;
  std::string ontology_text;
  OntologyFormat format = OntologyFormat::obo;
  FuzzyConfig config;
  /// At most one of these two; neither leaves the instance without an index.
  std::optional<std::string> embedding_text;
  std::optional<AlphaParams> generate;

  /// Reads the POST /instances body:
  /// `{"name"?, "format", "family"?, "ontology", "embedding"?: {"upload": text} | {"generate": {alpha, dim, seed}}}`.
  /// Throws InvalidParams, UnsupportedFormat.
  static CreateRequest from_json(const nlohmann::json& body);
};

struct CreateResult {
  std::string instance_id;
  std::optional<JobStatus> job;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kMaxQueryK = 200;

/// In-memory registry of ontology instances plus the background jobs that
/// generate their embeddings. Every method is safe to call concurrently.
/// Response builders return JSON whose object keys are sorted and whose
/// arrays follow concept-id or rank order, so equal inputs give equal bytes.
class Service {
 public:
  /// `generation_threads` is forwarded to generate(); 0 picks the hardware count.
  explicit Service(unsigned generation_threads = 0);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Parses synchronously; an upload is imported synchronously, a generate
  /// request is queued as a job. Throws the parser's errors,
  /// UnsupportedFormat, InvalidParams, plus import errors.
  CreateResult create_instance(const CreateRequest& request);

  /// Throws UnknownInstance.
  std::shared_ptr<const Instance> instance(std::string_view instance_id) const;
  std::vector<std::shared_ptr<const Instance>> instances() const;

  /// Throws UnknownJob.
  JobStatus job(std::string_view job_id) const;
  /// Blocks until the job is done or failed. Throws UnknownJob.
  JobStatus wait(std::string_view job_id) const;

  nlohmann::json list_json() const;
  nlohmann::json concept_json(std::string_view instance_id, std::string_view concept_id) const;
  nlohmann::json search_json(std::string_view instance_id, std::string_view q, std::size_t limit) const;
  nlohmann::json neighborhood_json(std::string_view instance_id, std::string_view concept_id,
                                   std::size_t depth) const;
  /// `body` is `{"expr": text}` or `{"ast": node}`. `k` above kMaxQueryK is
  /// capped; `family` overrides the instance's configuration for this call.
  /// Throws NoEmbedding, InvalidParams plus parser and evaluator errors.
  nlohmann::json query_json(std::string_view instance_id, const nlohmann::json& body, std::size_t k,
                            std::optional<Family> family = std::nullopt) const;

  /// Writes ontology.json, embedding.tsv (when present) and instance.json.
  void snapshot(std::string_view instance_id, const std::filesystem::path& dir) const;
  /// Recreates an instance from a snapshot directory; returns its new id.
  std::string restore(const std::filesystem::path& dir);

 private:
  void publish(std::shared_ptr<const Instance> inst);
  void set_job(const std::string& job_id, JobState state, std::string detail);

  unsigned generation_threads_;
  mutable std::shared_mutex instances_mutex_;
  std::map<std::string, std::shared_ptr<const Instance>> instances_;
  std::uint64_t next_instance_ = 1;

  mutable std::mutex jobs_mutex_;
  mutable std::condition_variable jobs_cv_;
  std::map<std::string, JobStatus> jobs_;
  std::uint64_t next_job_ = 1;
  // Declared last so running jobs are joined before the state above goes away.
  std::vector<std::jthread> workers_;
};

/// `{"error": {"code", "message", "details", "position"?}}`.
nlohmann::json error_json(const Error& error);
/// HTTP status for an error surfaced by the service. `concept_route` marks
/// endpoints whose path names a concept, where UnknownConcept is a 404.
int http_status(ErrorCode code, bool concept_route = false);

/// HTTP front end over a Service. The service must outlive the server.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves until stop(); returns false if binding failed.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Serves on the socket from bind_any_port until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fuzzyvis
