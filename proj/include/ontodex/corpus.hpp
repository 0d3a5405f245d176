#pragma once
//---------------------------------------------------------------------------
// Wiki-style documents, the category parent graph, and the per-document
// candidate name set (title, categories, parents of those categories).
//---------------------------------------------------------------------------
#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontodex/error.hpp"
#include "ontodex/text_metrics.hpp"

namespace ontodex {
//---------------------------------------------------------------------------
struct Document {
  std::string id;
  std::string title;
  std::vector<std::string> categories;
  std::string text;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const Document&, const Document&) = default;
};
//---------------------------------------------------------------------------
/// Child -> parent category edges. Category names are held normalized.
class CategoryGraph {
 public:
  CategoryGraph() = default;

  CategoryGraph(const std::vector<std::string>& categories,
                const std::vector<std::pair<std::string, std::string>>& edges) {
    for (const auto& c : categories) {
      auto n = normalize(c);
      if (n.empty()) throw ValidationError("category graph: empty category name");
      parents_.try_emplace(std::move(n));
    }
    for (const auto& [child_raw, parent_raw] : edges) {
      auto child = normalize(child_raw);
      auto parent = normalize(parent_raw);
      if (!parents_.contains(child)) throw ValidationError("category graph: unknown child '" + child_raw + "'");
      if (!parents_.contains(parent)) throw ValidationError("category graph: unknown parent '" + parent_raw + "'");
      if (child == parent) throw ValidationError("category graph: self loop on '" + child_raw + "'");
      parents_[child].insert(std::move(parent));
    }
  }

  /// Adds an isolated category; returns false if it already existed.
  bool add_category(std::string_view name) {
    auto n = normalize(name);
    if (n.empty()) return false;
    return parents_.try_emplace(std::move(n)).second;
  }

  bool contains(std::string_view name) const { return parents_.contains(normalize(name)); }
  std::size_t size() const noexcept { return parents_.size(); }

  std::size_t edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, p] : parents_) n += p.size();
    return n;
  }

  /// Direct parents of a category; empty for unknown categories.
  const std::set<std::string>& parents(std::string_view name) const {
    static const std::set<std::string> kNone;
    auto it = parents_.find(normalize(name));
    return it == parents_.end() ? kNone : it->second;
  }

  const std::map<std::string, std::set<std::string>>& entries() const noexcept { return parents_; }

 private:
  std::map<std::string, std::set<std::string>> parents_;
};
//---------------------------------------------------------------------------
/// Documents plus their category graph. Document categories missing from the
/// graph are added as isolated categories and counted in missing_categories.
class Corpus {
 public:
  Corpus() = default;

  Corpus(std::vector<Document> documents, CategoryGraph graph)
      : documents_(std::move(documents)), graph_(std::move(graph)) {
    std::set<std::string> ids;
    for (const auto& d : documents_) {
      if (!ids.insert(d.id).second) throw ValidationError("duplicate document id '" + d.id + "'");
      if (normalize(d.title).empty()) throw ValidationError("document '" + d.id + "' has an empty title");
      for (const auto& c : d.categories) {
        if (graph_.add_category(c)) ++missing_categories_;
      }
    }
  }

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const CategoryGraph& category_graph() const noexcept { return graph_; }
  std::size_t missing_categories() const noexcept { return missing_categories_; }
  bool empty() const noexcept { return documents_.empty(); }
  std::size_t size() const noexcept { return documents_.size(); }

 private:
  std::vector<Document> documents_;
  CategoryGraph graph_;
  std::size_t missing_categories_ = 0;
};
//---------------------------------------------------------------------------
inline Document document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("document must be a JSON object");
  auto str = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) throw ParseError(std::string("missing field '") + key + "'");
      return {};
    }
    if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
  };
  Document d;
  d.id = str("id", true);
  d.title = str("title", true);
  d.text = str("text", false);
  if (auto it = j.find("categories"); it != j.end()) {
    if (!it->is_array()) throw ParseError("field 'categories' must be an array");
    for (const auto& c : *it) {
      if (!c.is_string()) throw ParseError("category names must be strings");
      d.categories.push_back(c.get<std::string>());
    }
  }
  if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("field 'metadata' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw ParseError("metadata values must be strings");
      d.metadata.emplace(k, v.get<std::string>());
    }
  }
  if (normalize(d.title).empty()) throw ValidationError("document '" + d.id + "' has an empty title");
  return d;
}

inline nlohmann::json to_json(const Document& d) {
  nlohmann::json j = {{"id", d.id}, {"title", d.title}, {"categories", d.categories}, {"text", d.text}};
  if (!d.metadata.empty()) j["metadata"] = d.metadata;
  return j;
}

/// Reads JSON Lines, one document per line, blank lines skipped. Errors
/// carry the 1-based line number.
inline std::vector<Document> load_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Document d;
    try {
      d = document_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("corpus: ") + e.what(), line_no);
    } catch (const ParseError& e) {
      throw ParseError(std::string("corpus: ") + e.what(), line_no);
    } catch (const ValidationError& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(d.id).second) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": duplicate document id '" + d.id + "'");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

/// Reads {"categories":[...],"edges":[{"child":..,"parent":..}]}.
inline CategoryGraph load_category_graph(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("category graph: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("category graph: expected a JSON object");
  std::vector<std::string> categories;
  std::vector<std::pair<std::string, std::string>> edges;
  try {
    if (j.contains("categories")) categories = j.at("categories").get<std::vector<std::string>>();
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        edges.emplace_back(e.at("child").get<std::string>(), e.at("parent").get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("category graph: ") + e.what());
  }
  return CategoryGraph(categories, edges);
}

inline nlohmann::json to_json(const CategoryGraph& g) {
  nlohmann::json categories = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [child, parents] : g.entries()) {
    categories.push_back(child);
    for (const auto& p : parents) edges.push_back({{"child", child}, {"parent", p}});
  }
  return {{"categories", std::move(categories)}, {"edges", std::move(edges)}};
}
//---------------------------------------------------------------------------
/// CS for one document: normalized title, categories, and the direct
/// parents of those categories.
inline std::set<std::string> candidate_names(const Document& doc, const CategoryGraph& graph) {
  std::set<std::string> cs;
  if (auto t = normalize(doc.title); !t.empty()) cs.insert(std::move(t));
  for (const auto& c : doc.categories) {
    auto n = normalize(c);
    if (n.empty()) continue;
    for (const auto& p : graph.parents(n)) cs.insert(p);
    cs.insert(std::move(n));
  }
  return cs;
}

enum class CsMaxMode { global, local_max };

inline std::string_view to_string(CsMaxMode m) { return m == CsMaxMode::global ? "global" : "local-max"; }

inline std::optional<CsMaxMode> parse_cs_max_mode(std::string_view s) {
  if (s == "global") return CsMaxMode::global;
  if (s == "local-max") return CsMaxMode::local_max;
  return std::nullopt;
}

/// |CS_max|: category count (global) or the largest CS in the corpus
/// (local-max). Never below 1.
inline std::size_t cs_max(const Corpus& corpus, CsMaxMode mode) {
  if (corpus.empty()) throw RangeError("cs_max: corpus is empty");
  std::size_t value = 0;
  if (mode == CsMaxMode::global) {
    value = corpus.category_graph().size();
  } else {
    for (const auto& d : corpus.documents()) {
      value = std::max(value, candidate_names(d, corpus.category_graph()).size());
    }
  }
  return std::max<std::size_t>(value, 1);
}
//---------------------------------------------------------------------------
}  // namespace ontodex
