#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "fuzzyvis/alpha_embedding.hpp"
#include "fuzzyvis/embedding_store.hpp"
#include "fuzzyvis/error.hpp"
#include "fuzzyvis/fuzzy.hpp"
#include "fuzzyvis/ontology.hpp"
#include "fuzzyvis/query.hpp"

namespace py = pybind11;
using namespace fuzzyvis;

namespace {

Family family_of(const std::string& token) { return parse_family(token); }

std::vector<std::string> id_list(std::span<const ConceptId> ids) { return {ids.begin(), ids.end()}; }

std::vector<Degree> degrees(const std::vector<double>& xs) { return {xs.begin(), xs.end()}; }

py::dict record_dict(const ConceptRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["label"] = r.label;
  d["definition"] = r.definition ? py::cast(*r.definition) : py::none();
  d["parents"] = r.parents;
  d["children"] = r.children;
  return d;
}

py::dict metadata_dict(const ConceptMetadata& m) {
  py::dict d;
  d["depth"] = m.depth;
  d["subtree_size"] = m.subtree_size;
  d["child_count"] = m.child_count;
  d["is_leaf"] = m.is_leaf;
  return d;
}

py::dict provenance_dict(const Provenance& p) {
  py::dict d;
  d["source"] = p.source == EmbeddingSource::generated ? "generated" : "imported";
  d["family"] = std::string(to_string(p.family));
  d["alpha"] = p.alpha ? py::cast(*p.alpha) : py::none();
  d["seed"] = p.seed ? py::cast(*p.seed) : py::none();
  return d;
}

const char* op_name(QueryOp op) {
  switch (op) {
    case QueryOp::concept_ref: return "ref";
    case QueryOp::conjunction: return "and";
    case QueryOp::disjunction: return "or";
    case QueryOp::negation: return "not";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fuzzy ontology embeddings and concept queries";

  static py::exception<Error> error_type(m, "FuzzyvisError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = to_string(e.code());
      exc.attr("details") = e.details();
      exc.attr("position") = e.position() >= 0 ? py::cast(e.position()) : py::none();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // ontology
  py::class_<OntologyGraph>(m, "OntologyGraph")
      .def("__len__", &OntologyGraph::size)
      .def("__contains__", [](const OntologyGraph& g, const std::string& id) { return g.contains(id); })
      .def_property_readonly("ids",
                             [](const OntologyGraph& g) {
                               std::vector<std::string> out;
                               for (const auto& r : g.records()) out.push_back(r.id);
                               return out;
                             })
      .def("record", [](const OntologyGraph& g, const std::string& id) { return record_dict(g.at(id)); })
      .def("parents", [](const OntologyGraph& g, const std::string& id) { return g.at(id).parents; })
      .def("children", [](const OntologyGraph& g, const std::string& id) { return g.at(id).children; })
      .def("roots", &OntologyGraph::roots)
      .def("leaves", &OntologyGraph::leaves)
      .def("to_json", [](const OntologyGraph& g) { return to_json_text(g); });

  m.def("parse_obo", [](const std::string& text) { return parse_obo(text); }, py::arg("text"));
  m.def("parse_json", [](const std::string& text) { return parse_json(text); }, py::arg("text"));
  m.def(
      "metadata",
      [](const OntologyGraph& g) {
        const auto table = compute_metadata(g);
        py::dict out;
        for (std::size_t i = 0; i < g.size(); ++i) out[py::str(g.record(i).id)] = metadata_dict(table[i]);
        return out;
      },
      py::arg("graph"), "Depth, subtree size, child count and leaf flag per concept id.");
  m.def(
      "search_labels",
      [](const OntologyGraph& g, const std::string& q, std::size_t limit) { return search_labels(g, q, limit); },
      py::arg("graph"), py::arg("query"), py::arg("limit") = 10);
  m.def(
      "neighborhood",
      [](const OntologyGraph& g, const std::string& id, std::size_t depth) { return neighborhood(g, id, depth); },
      py::arg("graph"), py::arg("id"), py::arg("depth"));
  m.def(
      "leaf_distance",
      [](const OntologyGraph& g, const std::string& a, const std::string& b) { return leaf_distance(g, a, b); },
      py::arg("graph"), py::arg("a"), py::arg("b"));

  // fuzzy algebra; families are passed by token
  m.def(
      "tnorm", [](const std::string& f, double a, double b) { return tnorm(FuzzyConfig{family_of(f)}, Degree(a), Degree(b)).value(); },
      py::arg("family"), py::arg("a"), py::arg("b"));
  m.def(
      "tconorm",
      [](const std::string& f, double a, double b) { return tconorm(FuzzyConfig{family_of(f)}, Degree(a), Degree(b)).value(); },
      py::arg("family"), py::arg("a"), py::arg("b"));
  m.def("negate", [](double a) { return negate(FuzzyConfig{}, Degree(a)).value(); }, py::arg("a"));
  m.def(
      "fold_tnorm",
      [](const std::string& f, const std::vector<double>& xs) { return fold_tnorm(FuzzyConfig{family_of(f)}, degrees(xs)).value(); },
      py::arg("family"), py::arg("values"));
  m.def(
      "fold_tconorm",
      [](const std::string& f, const std::vector<double>& xs) {
        return fold_tconorm(FuzzyConfig{family_of(f)}, degrees(xs)).value();
      },
      py::arg("family"), py::arg("values"));

  // embeddings
  py::class_<EmbeddingMatrix, std::shared_ptr<EmbeddingMatrix>>(m, "EmbeddingMatrix")
      .def_property_readonly("dim", &EmbeddingMatrix::dim)
      .def("__len__", &EmbeddingMatrix::size)
      .def("__contains__", [](const EmbeddingMatrix& e, const std::string& id) { return e.contains(id); })
      .def_property_readonly("ids", [](const EmbeddingMatrix& e) { return id_list(e.ids()); })
      .def_property_readonly("provenance", [](const EmbeddingMatrix& e) { return provenance_dict(e.provenance()); })
      .def("vector",
           [](const EmbeddingMatrix& e, const std::string& id) {
             auto v = e.vector(id);
             return std::vector<double>(v.begin(), v.end());
           })
      .def("__eq__", [](const EmbeddingMatrix& a, const EmbeddingMatrix& b) { return a == b; });

  m.def(
      "generate",
      [](const OntologyGraph& g, double alpha, std::size_t dim, std::uint64_t seed, const std::string& family,
         unsigned threads) {
        py::gil_scoped_release release;
        return std::make_shared<EmbeddingMatrix>(generate(g, AlphaParams{alpha, dim, seed}, FuzzyConfig{family_of(family)}, threads));
      },
      py::arg("graph"), py::arg("alpha") = 0.5, py::arg("dim") = 100, py::arg("seed") = 0,
      py::arg("family") = "product", py::arg("threads") = 0u);
  m.def("export_embedding", [](const EmbeddingMatrix& e) { return export_embedding(e); }, py::arg("matrix"));
  m.def(
      "import_embedding",
      [](const std::string& text, const OntologyGraph* graph) {
        auto r = import_embedding(text, graph);
        return py::make_tuple(std::make_shared<EmbeddingMatrix>(std::move(r.matrix)), r.warnings, r.unknown_concepts);
      },
      py::arg("text"), py::arg("graph") = nullptr, "Returns (matrix, warnings, unknown_concepts).");
  m.def(
      "cosine", [](const std::vector<double>& u, const std::vector<double>& v) { return cosine(u, v); }, py::arg("u"),
      py::arg("v"));

  py::class_<VectorIndex, std::shared_ptr<VectorIndex>>(m, "VectorIndex")
      .def(py::init([](std::shared_ptr<EmbeddingMatrix> matrix) {
             return std::make_shared<VectorIndex>(std::shared_ptr<const EmbeddingMatrix>(std::move(matrix)));
           }),
           py::arg("matrix"))
      .def("__len__", &VectorIndex::size)
      .def_property_readonly("dim", &VectorIndex::dim)
      .def(
          "top_k",
          [](const VectorIndex& idx, const std::vector<double>& q, std::size_t k) {
            auto r = idx.top_k(q, k);
            std::vector<std::pair<std::string, double>> hits;
            for (const auto& h : r.hits) hits.emplace_back(h.concept_id, h.score);
            return py::make_tuple(hits, r.zero_query);
          },
          py::arg("query"), py::arg("k"), "Returns ([(id, score), ...], zero_query).");

  // queries
  py::class_<QueryNode>(m, "Query")
      .def_property_readonly("op", [](const QueryNode& q) { return op_name(q.op); })
      .def_property_readonly("id", [](const QueryNode& q) { return q.id; })
      .def_property_readonly("children", [](const QueryNode& q) { return q.children; })
      .def("__str__", [](const QueryNode& q) { return format_expression(q); })
      .def("__repr__", [](const QueryNode& q) { return "<Query " + format_expression(q) + ">"; })
      .def("__eq__", [](const QueryNode& a, const QueryNode& b) { return a == b; })
      .def("to_json", [](const QueryNode& q) { return to_json(q).dump(); });

  m.def(
      "parse_expression", [](const std::string& text, const OntologyGraph& g) { return parse_expression(text, g); },
      py::arg("text"), py::arg("graph"));
  m.def("format_expression", &format_expression, py::arg("query"));
  m.def(
      "query_from_json",
      [](const std::string& text, const OntologyGraph* g) { return query_from_json(nlohmann::json::parse(text), g); },
      py::arg("text"), py::arg("graph") = nullptr);
  m.def(
      "evaluate",
      [](const QueryNode& q, const EmbeddingMatrix& e, const std::string& family) {
        return evaluate(q, e, FuzzyConfig{family_of(family)});
      },
      py::arg("query"), py::arg("matrix"), py::arg("family") = "product");
  m.def(
      "answer",
      [](const QueryNode& q, const VectorIndex& idx, const std::string& family, std::size_t k) {
        auto r = answer(q, idx, FuzzyConfig{family_of(family)}, k);
        py::dict out;
        std::vector<std::pair<std::string, double>> hits;
        for (const auto& h : r.hits) hits.emplace_back(h.concept_id, h.score);
        out["hits"] = hits;
        out["zero_query"] = r.zero_query;
        out["echo"] = r.echo;
        return out;
      },
      py::arg("query"), py::arg("index"), py::arg("family") = "product", py::arg("k") = 10);
}
