#pragma once
//---------------------------------------------------------------------------
// Application ontology: classes with attributes, typed relations, and the
// graph algorithms run over it (hop distances, shortest paths, fragments).
//
// Every class and attribute name is stored in normalized form. Relations
// are traversed as undirected unit-length edges whatever their kind.
//---------------------------------------------------------------------------
#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontodex/error.hpp"
#include "ontodex/text_metrics.hpp"

namespace ontodex {
//---------------------------------------------------------------------------
enum class RelationKind { associative, taxonomical, hierarchical };

inline std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::associative:
      return "associative";
    case RelationKind::taxonomical:
      return "taxonomical";
    case RelationKind::hierarchical:
      return "hierarchical";
  }
  return "associative";
}

inline std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  if (s == "associative") return RelationKind::associative;
  if (s == "taxonomical") return RelationKind::taxonomical;
  if (s == "hierarchical") return RelationKind::hierarchical;
  return std::nullopt;
}
//---------------------------------------------------------------------------
struct OntologyAttribute {
  std::string name;
  std::string description;
  std::string owner;

  friend bool operator==(const OntologyAttribute&, const OntologyAttribute&) = default;
};

struct OntologyClass {
  std::string name;
  std::string description;
  std::vector<OntologyAttribute> attributes;

  friend bool operator==(const OntologyClass&, const OntologyClass&) = default;
};

struct Relation {
  std::string from;
  std::string to;
  RelationKind kind = RelationKind::associative;

  friend auto operator<=>(const Relation&, const Relation&) = default;
};

/// Marker for a hop count between classes in different components.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
//---------------------------------------------------------------------------
class Ontology {
 public:
  Ontology() = default;

  /// Normalizes every name and validates the model. Throws ValidationError
  /// on empty or duplicate names, dangling or self relations, and repeated
  /// (from, to, kind) triples.
  Ontology(std::vector<OntologyClass> classes, std::vector<Relation> relations) {
    for (auto& c : classes) {
      c.name = normalize(c.name);
      if (c.name.empty()) throw ValidationError("class with empty name");
      std::set<std::string> seen;
      for (auto& a : c.attributes) {
        a.name = normalize(a.name);
        a.owner = c.name;
        if (a.name.empty()) throw ValidationError("attribute with empty name in class '" + c.name + "'");
        if (!seen.insert(a.name).second) {
          throw ValidationError("duplicate attribute '" + a.name + "' in class '" + c.name + "'");
        }
      }
      std::sort(c.attributes.begin(), c.attributes.end(),
                [](const auto& x, const auto& y) { return x.name < y.name; });
    }
    std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    for (std::size_t i = 1; i < classes.size(); ++i) {
      if (classes[i].name == classes[i - 1].name) {
        throw ValidationError("duplicate class name '" + classes[i].name + "'");
      }
    }
    classes_ = std::move(classes);
    for (std::size_t i = 0; i < classes_.size(); ++i) by_name_.emplace(classes_[i].name, i);

    for (auto& r : relations) {
      r.from = normalize(r.from);
      r.to = normalize(r.to);
      if (!by_name_.contains(r.from)) throw ValidationError("relation from unknown class '" + r.from + "'");
      if (!by_name_.contains(r.to)) throw ValidationError("relation to unknown class '" + r.to + "'");
      if (r.from == r.to) throw ValidationError("self relation on class '" + r.from + "'");
    }
    std::sort(relations.begin(), relations.end());
    for (std::size_t i = 1; i < relations.size(); ++i) {
      if (relations[i] == relations[i - 1]) {
        throw ValidationError("duplicate relation '" + relations[i].from + "' -> '" + relations[i].to + "' (" +
                              std::string(to_string(relations[i].kind)) + ")");
      }
    }
    relations_ = std::move(relations);

    adjacency_.assign(classes_.size(), {});
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      const std::size_t u = by_name_.at(relations_[r].from);
      const std::size_t v = by_name_.at(relations_[r].to);
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
      edge_relations_[std::minmax(u, v)].push_back(r);
    }
    // Classes are sorted by name, so sorting indices sorts neighbours by name.
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    for (const auto& c : classes_) element_count_ += 1 + c.attributes.size();
  }

  const std::vector<OntologyClass>& classes() const noexcept { return classes_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  std::size_t class_count() const noexcept { return classes_.size(); }

  /// |ONT|: number of class names plus attribute names (with repeats).
  std::size_t element_count() const noexcept { return element_count_; }

  /// Index of a class in classes(); the argument is normalized first.
  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = by_name_.find(normalize(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw ValidationError("unknown class '" + std::string(name) + "'");
    return *idx;
  }

  const OntologyClass* find_class(std::string_view name) const {
    auto idx = index_of(name);
    return idx ? &classes_[*idx] : nullptr;
  }

  /// Undirected neighbours by class index, ascending (= by name).
  const std::vector<std::size_t>& neighbors(std::size_t index) const { return adjacency_.at(index); }

  /// Relations connecting two classes in either direction.
  std::vector<Relation> relations_between(std::size_t a, std::size_t b) const {
    std::vector<Relation> out;
    auto it = edge_relations_.find(std::minmax(a, b));
    if (it != edge_relations_.end()) {
      for (std::size_t r : it->second) out.push_back(relations_[r]);
    }
    return out;
  }

  friend bool operator==(const Ontology& x, const Ontology& y) {
    return x.classes_ == y.classes_ && x.relations_ == y.relations_;
  }

 private:
  std::vector<OntologyClass> classes_;
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edge_relations_;
  std::size_t element_count_ = 0;
};
//---------------------------------------------------------------------------
inline Ontology ontology_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("ontology: expected a JSON object");
  auto get_string = [](const nlohmann::json& obj, const char* key, bool required) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) throw ParseError(std::string("ontology: missing field '") + key + "'");
      return {};
    }
    if (!it->is_string()) throw ParseError(std::string("ontology: field '") + key + "' must be a string");
    return it->get<std::string>();
  };
  auto get_array = [](const nlohmann::json& obj, const char* key) -> const nlohmann::json* {
    auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (!it->is_array()) throw ParseError(std::string("ontology: field '") + key + "' must be an array");
    return &*it;
  };

  std::vector<OntologyClass> classes;
  if (const auto* arr = get_array(j, "classes")) {
    for (const auto& jc : *arr) {
      if (!jc.is_object()) throw ParseError("ontology: class entry must be an object");
      OntologyClass c;
      c.name = get_string(jc, "name", true);
      c.description = get_string(jc, "description", false);
      if (const auto* attrs = get_array(jc, "attributes")) {
        for (const auto& ja : *attrs) {
          if (!ja.is_object()) throw ParseError("ontology: attribute entry must be an object");
          c.attributes.push_back({get_string(ja, "name", true), get_string(ja, "description", false), c.name});
        }
      }
      classes.push_back(std::move(c));
    }
  }
  std::vector<Relation> relations;
  if (const auto* arr = get_array(j, "relations")) {
    for (const auto& jr : *arr) {
      if (!jr.is_object()) throw ParseError("ontology: relation entry must be an object");
      const auto kind_name = get_string(jr, "kind", true);
      auto kind = parse_relation_kind(kind_name);
      if (!kind) throw ParseError("ontology: unknown relation kind '" + kind_name + "'");
      relations.push_back({get_string(jr, "from", true), get_string(jr, "to", true), *kind});
    }
  }
  return Ontology(std::move(classes), std::move(relations));
}

/// Reads the JSON ontology format. Throws ParseError or ValidationError.
inline Ontology load_ontology(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("ontology: ") + e.what());
  }
  return ontology_from_json(j);
}

/// Canonical JSON of a validated ontology (sorted, normalized).
inline nlohmann::json to_json(const Ontology& ont) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : ont.classes()) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : c.attributes) attrs.push_back({{"name", a.name}, {"description", a.description}});
    classes.push_back({{"name", c.name}, {"description", c.description}, {"attributes", std::move(attrs)}});
  }
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : ont.relations()) {
    relations.push_back({{"from", r.from}, {"to", r.to}, {"kind", std::string(to_string(r.kind))}});
  }
  return {{"classes", std::move(classes)}, {"relations", std::move(relations)}};
}
//---------------------------------------------------------------------------
/// Multi-source BFS hop counts indexed like Ontology::classes();
/// kUnreachable where no path exists.
inline std::vector<std::size_t> hop_distances(const Ontology& ont, std::span<const std::size_t> sources) {
  std::vector<std::size_t> dist(ont.class_count(), kUnreachable);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (dist.at(s) != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : ont.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

/// Minimum-hop path from `from` to `to` as class indices. Among equal-length
/// paths the lexicographically smallest name sequence wins. nullopt if the
/// classes are in different components.
inline std::optional<std::vector<std::size_t>> shortest_path_indices(const Ontology& ont, std::size_t from,
                                                                     std::size_t to) {
  const std::size_t target[] = {to};
  const auto dist = hop_distances(ont, target);
  if (dist.at(from) == kUnreachable) return std::nullopt;
  std::vector<std::size_t> path{from};
  std::size_t cur = from;
  while (cur != to) {
    // Neighbours are name-ordered: the first one a step closer to the target
    // extends the smallest prefix.
    for (std::size_t v : ont.neighbors(cur)) {
      if (dist[v] + 1 == dist[cur]) {
        cur = v;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

/// Shortest path by class name. Throws ValidationError for unknown names.
inline std::optional<std::vector<std::string>> shortest_path(const Ontology& ont, std::string_view from,
                                                             std::string_view to) {
  auto indices = shortest_path_indices(ont, ont.require(from), ont.require(to));
  if (!indices) return std::nullopt;
  std::vector<std::string> names;
  names.reserve(indices->size());
  for (std::size_t i : *indices) names.push_back(ont.classes()[i].name);
  return names;
}
//---------------------------------------------------------------------------
/// A connected piece of the ontology: classes and the relations kept
/// between them. Both lists are sorted.
struct OntologyFragment {
  std::vector<std::string> classes;
  std::vector<Relation> relations;

  bool empty() const noexcept { return classes.empty(); }

  bool contains(std::string_view name) const {
    return std::binary_search(classes.begin(), classes.end(), name, std::less<>{});
  }

  /// Attributes of the fragment's classes, looked up in the source ontology.
  std::vector<OntologyAttribute> attributes(const Ontology& ont) const {
    std::vector<OntologyAttribute> out;
    for (const auto& name : classes) {
      if (const auto* c = ont.find_class(name)) out.insert(out.end(), c->attributes.begin(), c->attributes.end());
    }
    return out;
  }

  friend bool operator==(const OntologyFragment&, const OntologyFragment&) = default;
};

struct FragmentSelection {
  OntologyFragment fragment;
  /// Seed pairs with no connecting path, each ordered (smaller, larger).
  std::vector<std::pair<std::string, std::string>> unreachable;
};

/// Smallest fragment holding the seed classes and one shortest path for
/// every seed pair. Relations kept: those along the chosen paths plus any
/// direct relation between two seed classes.
inline FragmentSelection select_fragment(const Ontology& ont, std::span<const std::string> seed) {
  if (seed.empty()) throw ValidationError("fragment seed is empty");
  std::vector<std::size_t> seeds;
  for (const auto& name : seed) seeds.push_back(ont.require(name));
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::set<std::size_t> members(seeds.begin(), seeds.end());
  std::set<Relation> relations;
  FragmentSelection out;
  auto keep_edge = [&](std::size_t u, std::size_t v) {
    for (auto& r : ont.relations_between(u, v)) relations.insert(std::move(r));
  };

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      keep_edge(seeds[i], seeds[j]);
      auto path = shortest_path_indices(ont, seeds[i], seeds[j]);
      if (!path) {
        out.unreachable.emplace_back(ont.classes()[seeds[i]].name, ont.classes()[seeds[j]].name);
        continue;
      }
      members.insert(path->begin(), path->end());
      for (std::size_t k = 1; k < path->size(); ++k) keep_edge((*path)[k - 1], (*path)[k]);
    }
  }
  for (std::size_t m : members) out.fragment.classes.push_back(ont.classes()[m].name);
  out.fragment.relations.assign(relations.begin(), relations.end());
  return out;
}

inline nlohmann::json to_json(const OntologyFragment& f) {
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : f.relations) {
    relations.push_back({{"from", r.from}, {"to", r.to}, {"kind", std::string(to_string(r.kind))}});
  }
  return {{"classes", f.classes}, {"relations", std::move(relations)}};
}

inline OntologyFragment fragment_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("classes") || !j.contains("relations") || !j["classes"].is_array() ||
      !j["relations"].is_array()) {
    throw ParseError("fragment: expected {\"classes\":[...],\"relations\":[...]}");
  }
  OntologyFragment f;
  for (const auto& c : j["classes"]) {
    if (!c.is_string()) throw ParseError("fragment: class names must be strings");
    f.classes.push_back(c.get<std::string>());
  }
  for (const auto& r : j["relations"]) {
    if (!r.is_object() || !r.contains("from") || !r.contains("to") || !r.contains("kind") ||
        !r["from"].is_string() || !r["to"].is_string() || !r["kind"].is_string()) {
      throw ParseError("fragment: malformed relation");
    }
    auto kind = parse_relation_kind(r["kind"].get<std::string>());
    if (!kind) throw ParseError("fragment: unknown relation kind");
    f.relations.push_back({r["from"].get<std::string>(), r["to"].get<std::string>(), *kind});
  }
  std::sort(f.classes.begin(), f.classes.end());
  std::sort(f.relations.begin(), f.relations.end());
  return f;
}
//---------------------------------------------------------------------------
}  // namespace ontodex
