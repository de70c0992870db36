// Command-line front end: embed, query, validate, serve.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzyvis/alpha_embedding.hpp"
#include "fuzzyvis/embedding_store.hpp"
#include "fuzzyvis/query.hpp"
#include "fuzzyvis/service.hpp"
#include "fuzzyvis/text.hpp"

using namespace fuzzyvis;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInvalid = 2, kRuntime = 3 };

/// File-level failures that are not about the content of the input.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OntologyFormat format_for(const std::string& path, const std::string& flag) {
  if (!flag.empty()) return parse_format(flag);
  const auto ext = to_lower(std::filesystem::path(path).extension().string());
  return ext == ".json" ? OntologyFormat::json : OntologyFormat::obo;
}

OntologyGraph load_ontology(const std::string& path, const std::string& format) {
  return parse_ontology(read_file(path), format_for(path, format));
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoLeaves:
    case ErrorCode::MissingEmbedding:
    case ErrorCode::EmptyMatrix:
    case ErrorCode::EmptyIndex:
    case ErrorCode::UnknownInstance:
    case ErrorCode::UnknownJob:
    case ErrorCode::NoEmbedding: return false;
    default: return true;
  }
}

void print_error(const Error& e) {
  std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  for (const auto& d : e.details()) std::cerr << "  " << d << "\n";
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

struct EmbedArgs {
  std::string ontology, format, family = "product", out;
  double alpha = 0.5;
  std::size_t dim = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int run_embed(const EmbedArgs& a) {
  const auto graph = load_ontology(a.ontology, a.format);
  const FuzzyConfig config{parse_family(a.family)};
  const auto matrix = generate(graph, AlphaParams{a.alpha, a.dim, a.seed}, config, a.threads);
  if (a.out == "-") {
    export_embedding(matrix, std::cout);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw IoError("cannot write '" + a.out + "'");
    export_embedding(matrix, out);
    if (!out) throw IoError("write to '" + a.out + "' failed");
    std::cerr << "wrote " << matrix.size() << " vectors of dim " << matrix.dim() << " to " << a.out << "\n";
  }
  return kOk;
}

struct QueryArgs {
  std::string ontology, format, embedding, family, expr;
  std::size_t k = 10;
  bool json = false;
};

int run_query(const QueryArgs& a) {
  const auto graph = load_ontology(a.ontology, a.format);
  auto imported = import_embedding(read_file(a.embedding), &graph);
  for (const auto& w : imported.warnings) std::cerr << "warning: " << w << "\n";
  const FuzzyConfig config{a.family.empty() ? imported.matrix.provenance().family : parse_family(a.family)};
  VectorIndex index(std::move(imported.matrix));
  const auto node = parse_expression(a.expr, graph);
  const auto result = answer(node, index, config, a.k);

  if (a.json) {
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& h : result.hits)
      hits.push_back({{"id", h.concept_id}, {"label", graph.at(h.concept_id).label}, {"score", h.score}});
    nlohmann::json out{{"echo", result.echo},
                       {"family", to_string(config.family)},
                       {"zero_query", result.zero_query},
                       {"hits", hits}};
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "query: " << result.echo << "  (" << to_string(config.family) << ")\n";
  if (result.zero_query) std::cout << "note: the query vector is all zeros; every score is 0\n";
  for (std::size_t i = 0; i < result.hits.size(); ++i) {
    const auto& h = result.hits[i];
    char score[32];
    std::snprintf(score, sizeof score, "%.6f", h.score);
    std::cout << (i + 1) << "\t" << score << "\t" << h.concept_id << "\t" << graph.at(h.concept_id).label << "\n";
  }
  return kOk;
}

int run_validate(const std::string& path, const std::string& format) {
  const auto graph = load_ontology(path, format);
  const auto meta = compute_metadata(graph);
  std::size_t max_depth = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) max_depth = std::max(max_depth, meta[i].depth);
  std::cout << "ok: " << graph.size() << " concepts, " << graph.root_indices().size() << " roots, "
            << graph.leaf_indices().size() << " leaves, max depth " << max_depth << "\n";
  return kOk;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> preload;
  unsigned threads = 0;
};

/// `ontology:embedding:family`; the embedding part may be empty.
void preload(Service& svc, const std::string& spec) {
  const auto first = spec.find(':'), last = spec.rfind(':');
  if (first == std::string::npos || first == last)
    throw Error(ErrorCode::InvalidParams, "--preload expects ONTOLOGY:EMBEDDING:FAMILY", {spec});
  CreateRequest req;
  const auto onto = spec.substr(0, first), emb = spec.substr(first + 1, last - first - 1);
  req.name = std::filesystem::path(onto).stem().string();
  req.ontology_text = read_file(onto);
  req.format = format_for(onto, "");
  req.config.family = parse_family(spec.substr(last + 1));
  if (!emb.empty()) req.embedding_text = read_file(emb);
  auto r = svc.create_instance(req);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "loaded " << onto << " as " << r.instance_id << "\n";
}

int run_serve(const ServeArgs& a) {
  Service svc(a.threads);
  for (const auto& p : a.preload) preload(svc, p);
  HttpServer server(svc);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on http://" << a.host << ":" << a.port << "\n";
  const bool ok = server.listen(a.host, a.port);
  g_server = nullptr;
  if (!ok) {
    std::cerr << "error: could not listen on " << a.host << ":" << a.port << "\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy ontology embeddings and concept queries"};
  app.require_subcommand(1);

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Generate an alpha-embedding for an ontology");
  embed->add_option("--ontology", ea.ontology, "Ontology file (.obo or .json)")->required();
  embed->add_option("--format", ea.format, "obo or json (default: by extension)");
  embed->add_option("--alpha", ea.alpha, "Fading parameter in (0, 1)")->capture_default_str();
  embed->add_option("--dim", ea.dim, "Number of domain elements")->capture_default_str();
  embed->add_option("--seed", ea.seed, "Random seed")->capture_default_str();
  embed->add_option("--family", ea.family, "product, goedel or lukasiewicz")->capture_default_str();
  embed->add_option("--out", ea.out, "Output embedding file, or - for stdout")->required();
  embed->add_option("--threads", ea.threads, "Worker threads (0: hardware count)");

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Answer a concept expression against an embedding");
  query->add_option("--ontology", qa.ontology, "Ontology file")->required();
  query->add_option("--format", qa.format, "obo or json (default: by extension)");
  query->add_option("--embedding", qa.embedding, "Embedding file")->required();
  query->add_option("--family", qa.family, "Operator family (default: the embedding's)");
  query->add_option("--expr", qa.expr, "Expression, e.g. \"A AND NOT B\"")->required();
  query->add_option("--k", qa.k, "Number of hits")->capture_default_str();
  query->add_flag("--json", qa.json, "Print JSON");

  std::string vpath, vformat;
  auto* validate = app.add_subcommand("validate", "Parse and validate an ontology");
  validate->add_option("--ontology", vpath, "Ontology file")->required();
  validate->add_option("--format", vformat, "obo or json (default: by extension)");

  ServeArgs sa;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", sa.port, "TCP port")->capture_default_str();
  serve->add_option("--host", sa.host, "Bind address")->capture_default_str();
  serve->add_option("--preload", sa.preload, "ONTOLOGY:EMBEDDING:FAMILY, repeatable");
  serve->add_option("--threads", sa.threads, "Embedding generation threads (0: hardware count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*embed) return run_embed(ea);
    if (*query) return run_query(qa);
    if (*validate) return run_validate(vpath, vformat);
    if (*serve) return run_serve(sa);
  } catch (const Error& e) {
    print_error(e);
    return is_input_error(e.code()) ? kInvalid : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
