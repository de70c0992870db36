#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/ontology.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

namespace {

struct Stanza {
  std::size_t line = 0;
  std::optional<std::string> id;
  std::string name;
  std::optional<std::string> def;
  std::vector<std::pair<std::string, std::size_t>> is_a;  // target, line
  bool obsolete = false;
};

std::string_view strip_comment(std::string_view value) {
  auto bang = value.find(" !");
  if (bang != std::string_view::npos) value = value.substr(0, bang);
  else if (!value.empty() && value.front() == '!') value = {};
  return trim(value);
}

// `def: "text with \"escapes\"" [xrefs]` -> text
std::string unquote_def(std::string_view value) {
  if (value.empty() || value.front() != '"') return std::string(value);
  std::string out;
  for (std::size_t i = 1; i < value.size(); ++i) {
    char c = value[i];
    if (c == '\\' && i + 1 < value.size()) {
      out.push_back(value[++i]);
    } else if (c == '"') {
      break;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

OntologyGraph parse_obo(std::string_view text) {
  std::vector<Stanza> stanzas;
  bool in_term = false;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '!') continue;

    if (line.front() == '[') {
      in_term = line == "[Term]";
      if (in_term) {
        stanzas.emplace_back();
        stanzas.back().line = line_no;
      }
      continue;
    }
    if (!in_term) continue;

    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = trim(line.substr(colon + 1));
    Stanza& st = stanzas.back();

    if (key == "id") {
      auto id = strip_comment(value);
      if (!id.empty()) st.id = std::string(id);
    } else if (key == "name") {
      st.name = std::string(value);
    } else if (key == "def") {
      st.def = unquote_def(value);
    } else if (key == "is_a") {
      auto target = strip_comment(value);
      target = target.substr(0, target.find_first_of(" \t{"));
      if (!target.empty()) st.is_a.emplace_back(std::string(target), line_no);
    } else if (key == "is_obsolete") {
      st.obsolete = strip_comment(value) == "true";
    }
  }

  std::map<std::string, std::size_t> declared;  // id -> stanza line
  std::set<std::string> obsolete;
  for (const auto& st : stanzas) {
    if (!st.id)
      throw Error(ErrorCode::MissingId, "[Term] stanza at " + line_ref(st.line) + " has no id",
                  {line_ref(st.line)});
    auto [it, fresh] = declared.emplace(*st.id, st.line);
    if (!fresh)
      throw Error(ErrorCode::DuplicateId,
                  "id '" + *st.id + "' declared at " + line_ref(it->second) + " and " +
                      line_ref(st.line),
                  {*st.id, line_ref(it->second), line_ref(st.line)});
    if (st.obsolete) obsolete.insert(*st.id);
  }

  std::vector<ConceptRecord> records;
  records.reserve(stanzas.size());
  for (auto& st : stanzas) {
    if (st.obsolete) continue;
    ConceptRecord rec;
    rec.id = *st.id;
    rec.label = st.name.empty() ? *st.id : std::move(st.name);
    rec.definition = std::move(st.def);
    for (const auto& [target, line] : st.is_a) {
      if (!declared.count(target))
        throw Error(ErrorCode::DanglingParent,
                    "'" + rec.id + "' is_a undeclared '" + target + "' at " + line_ref(line),
                    {target, rec.id, line_ref(line)});
      if (!obsolete.count(target)) rec.parents.push_back(target);
    }
    records.push_back(std::move(rec));
  }
  return OntologyGraph::build(std::move(records));
}

OntologyGraph parse_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what(),
                {"$", "byte " + std::to_string(e.byte)});
  }

  auto schema_error = [](const std::string& path, const std::string& what) {
    return Error(ErrorCode::SchemaError, path + ": " + what, {path});
  };

  if (!doc.is_object()) throw schema_error("$", "expected an object");
  auto concepts = doc.find("concepts");
  if (concepts == doc.end() || !concepts->is_array())
    throw schema_error("$.concepts", "expected an array");

  std::vector<ConceptRecord> records;
  std::set<std::string> dropped;
  for (std::size_t i = 0; i < concepts->size(); ++i) {
    const std::string path = "$.concepts[" + std::to_string(i) + "]";
    const json& item = (*concepts)[i];
    if (!item.is_object()) throw schema_error(path, "expected an object");

    auto id = item.find("id");
    if (id == item.end()) throw Error(ErrorCode::MissingId, path + ": missing id", {path + ".id"});
    if (!id->is_string() || id->get<std::string>().empty())
      throw schema_error(path + ".id", "expected a non-empty string");

    ConceptRecord rec;
    rec.id = id->get<std::string>();
    auto label = item.find("label");
    if (label == item.end() || !label->is_string())
      throw schema_error(path + ".label", "expected a string");
    rec.label = label->get<std::string>();

    if (auto def = item.find("definition"); def != item.end() && !def->is_null()) {
      if (!def->is_string()) throw schema_error(path + ".definition", "expected a string");
      rec.definition = def->get<std::string>();
    }
    if (auto parents = item.find("parents"); parents != item.end()) {
      if (!parents->is_array()) throw schema_error(path + ".parents", "expected an array");
      for (std::size_t j = 0; j < parents->size(); ++j) {
        const json& p = (*parents)[j];
        if (!p.is_string())
          throw schema_error(path + ".parents[" + std::to_string(j) + "]", "expected a string");
        rec.parents.push_back(p.get<std::string>());
      }
    }
    if (auto obs = item.find("obsolete"); obs != item.end()) {
      if (!obs->is_boolean()) throw schema_error(path + ".obsolete", "expected a boolean");
      if (obs->get<bool>()) {
        dropped.insert(rec.id);
        continue;
      }
    }
    records.push_back(std::move(rec));
  }
  if (!dropped.empty()) {
    for (auto& rec : records)
      std::erase_if(rec.parents, [&](const ConceptId& p) { return dropped.count(p) > 0; });
  }
  return OntologyGraph::build(std::move(records));
}

std::string to_json_text(const OntologyGraph& graph) {
  nlohmann::ordered_json concepts = nlohmann::ordered_json::array();
  for (const auto& rec : graph.records()) {
    nlohmann::ordered_json item;
    item["id"] = rec.id;
    item["label"] = rec.label;
    if (rec.definition) item["definition"] = *rec.definition;
    item["parents"] = rec.parents;
    concepts.push_back(std::move(item));
  }
  nlohmann::ordered_json doc;
  doc["concepts"] = std::move(concepts);
  return doc.dump(1) + "\n";
}

}  // namespace fuzzyvis
