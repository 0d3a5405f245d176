#pragma once
//---------------------------------------------------------------------------
// Relevance of indexed documents to an abstract context, by two methods:
//
//  - graph: the document's ontology fragment and the context are compared
//    as labelled graphs (node names, neighbour counts, path lengths);
//  - weight: cosine of the angle between the context's element weights and
//    the document's element weights scaled by their description overlap.
//
// Either similarity is combined with the indexed sim into a relevance
// score, and documents are ranked by it.
//---------------------------------------------------------------------------
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
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
#include "ontodex/ontology.hpp"
#include "ontodex/text_metrics.hpp"
#include "ontodex/topic_indexer.hpp"

namespace ontodex {
//---------------------------------------------------------------------------
/// A problem-specific selection of ontology classes (and attributes),
/// validated against one ontology. Names are normalized and sorted.
class AbstractContext {
 public:
  AbstractContext(const Ontology& ont, const std::vector<std::string>& classes,
                  const std::vector<std::pair<std::string, std::string>>& attributes = {}) {
    std::set<std::string> names;
    for (const auto& c : classes) names.insert(ont.classes()[ont.require(c)].name);
    if (names.empty()) throw ValidationError("context has no classes");
    classes_.assign(names.begin(), names.end());

    std::set<ElementRef> attrs;
    for (const auto& [cls, attr] : attributes) {
      const auto& owner = ont.classes()[ont.require(cls)];
      const auto name = normalize(attr);
      auto it = std::find_if(owner.attributes.begin(), owner.attributes.end(),
                             [&](const OntologyAttribute& a) { return a.name == name; });
      if (it == owner.attributes.end()) {
        throw ValidationError("unknown attribute '" + attr + "' of class '" + owner.name + "'");
      }
      attrs.insert(ElementRef::of_attribute(owner.name, name));
    }
    attributes_.assign(attrs.begin(), attrs.end());

    for (const auto& r : ont.relations()) {
      if (std::binary_search(classes_.begin(), classes_.end(), r.from) &&
          std::binary_search(classes_.begin(), classes_.end(), r.to)) {
        relations_.push_back(r);
      }
    }
  }

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<ElementRef>& attributes() const noexcept { return attributes_; }
  /// All ontology relations with both ends in the context.
  const std::vector<Relation>& relations() const noexcept { return relations_; }

  OntologyFragment as_fragment() const { return {classes_, relations_}; }

 private:
  std::vector<std::string> classes_;
  std::vector<ElementRef> attributes_;
  std::vector<Relation> relations_;
};

/// Reads {"classes":[...],"attributes":[{"class":..,"name":..}]?}.
inline AbstractContext load_context(std::istream& in, const Ontology& ont) {
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::string>> attributes;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ParseError("context: expected a JSON object");
    classes = j.at("classes").get<std::vector<std::string>>();
    if (auto it = j.find("attributes"); it != j.end() && !it->is_null()) {
      for (const auto& a : *it) attributes.emplace_back(a.at("class").get<std::string>(), a.at("name").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("context: ") + e.what());
  }
  return AbstractContext(ont, classes, attributes);
}
//---------------------------------------------------------------------------
struct WeightedContext {
  std::map<ElementRef, double> weights;
  std::size_t l_max = 0;

  double weight(const ElementRef& e) const {
    auto it = weights.find(e);
    return it == weights.end() ? 0.0 : it->second;
  }
};

/// wa = 1/(d+1) for every class within l_max hops of the context (d = hop
/// distance to the nearest context class); attributes take their owner's
/// weight. Classes further away get no weight.
inline WeightedContext context_weights(const Ontology& ont, const AbstractContext& ctx, std::size_t l_max) {
  std::vector<std::size_t> sources;
  for (const auto& c : ctx.classes()) sources.push_back(ont.require(c));
  const auto dist = hop_distances(ont, sources);

  WeightedContext out;
  out.l_max = l_max;
  for (std::size_t i = 0; i < ont.class_count(); ++i) {
    if (dist[i] == kUnreachable || dist[i] > l_max) continue;
    const double wa = 1.0 / static_cast<double>(dist[i] + 1);
    const auto& c = ont.classes()[i];
    out.weights.emplace(ElementRef::of_class(c.name), wa);
    for (const auto& a : c.attributes) out.weights.emplace(ElementRef::of_attribute(c.name, a.name), wa);
  }
  return out;
}
//---------------------------------------------------------------------------
/// Undirected simple graph over uniquely named nodes, sorted by name.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  LabeledGraph(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges)
      : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
      throw ValidationError("graph node names must be unique");
    }
    adjacency_.assign(nodes_.size(), {});
    for (const auto& [a, b] : edges) {
      const auto u = index_of(a);
      const auto v = index_of(b);
      if (!u || !v) throw ValidationError("graph edge endpoint '" + (u ? b : a) + "' is not a node");
      if (*u == *v) continue;
      adjacency_[*u].insert(*v);
      adjacency_[*v].insert(*u);
    }
  }

  static LabeledGraph from_fragment(const OntologyFragment& f) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& r : f.relations) edges.emplace_back(r.from, r.to);
    return LabeledGraph(f.classes, edges);
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
  const std::set<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  /// BFS hop counts from one node; kUnreachable elsewhere.
  std::vector<std::size_t> distances_from(std::size_t source) const {
    std::vector<std::size_t> dist(nodes_.size(), kUnreachable);
    std::deque<std::size_t> queue{source};
    dist.at(source) = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adjacency_[u]) {
        if (dist[v] == kUnreachable) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return dist;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::set<std::size_t>> adjacency_;
};
//---------------------------------------------------------------------------
struct NodePair {
  std::size_t left = 0;   // node index in the first graph
  std::size_t right = 0;  // node index in the second graph
  double similarity = 0.0;
};

/// Greedy one-to-one pairing, most similar names first. Candidates below
/// `theta` are dropped; ties are ordered on the unordered name pair so the
/// result does not depend on argument order.
inline std::vector<NodePair> match_nodes(const LabeledGraph& g1, const LabeledGraph& g2, double theta) {
  struct Candidate {
    NodePair pair;
    const std::string* low;
    const std::string* high;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    for (std::size_t j = 0; j < g2.size(); ++j) {
      const auto& a = g1.nodes()[i];
      const auto& b = g2.nodes()[j];
      const double s = name_similarity(a, b);
      if (s >= theta) candidates.push_back({{i, j, s}, &std::min(a, b), &std::max(a, b)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.pair.similarity != y.pair.similarity) return x.pair.similarity > y.pair.similarity;
    if (*x.low != *y.low) return *x.low < *y.low;
    return *x.high < *y.high;
  });
  std::vector<bool> used1(g1.size()), used2(g2.size());
  std::vector<NodePair> out;
  for (const auto& c : candidates) {
    if (used1[c.pair.left] || used2[c.pair.right]) continue;
    used1[c.pair.left] = used2[c.pair.right] = true;
    out.push_back(c.pair);
  }
  return out;
}

/// Graph similarity in [0,1] as the product of four factors over the node
/// matching M:
///   coverage  2|M| / (|V1| + |V2|)
///   name      mean name similarity of matched pairs
///   nbr       mean min(deg1,deg2)/max(deg1,deg2) (1 when both are 0)
///   path      mean over pairs of matched pairs of min(p1,p2)/max(p1,p2),
///             1 if both unreachable, 0 if only one is, 1 for |M| < 2
/// Empty matching gives 0.
inline double graph_similarity(const LabeledGraph& g1, const LabeledGraph& g2, double theta) {
  auto matching = match_nodes(g1, g2, theta);
  if (matching.empty()) return 0.0;
  // Canonical order so the sums below are argument-order independent.
  std::sort(matching.begin(), matching.end(), [&](const NodePair& x, const NodePair& y) {
    const auto& xa = g1.nodes()[x.left];
    const auto& xb = g2.nodes()[x.right];
    const auto& ya = g1.nodes()[y.left];
    const auto& yb = g2.nodes()[y.right];
    const auto kx = std::minmax(xa, xb);
    const auto ky = std::minmax(ya, yb);
    if (kx != ky) return kx < ky;
    return xa < ya;
  });
  const double m = static_cast<double>(matching.size());

  const double coverage = 2.0 * m / static_cast<double>(g1.size() + g2.size());

  double name = 0.0;
  double nbr = 0.0;
  for (const auto& p : matching) {
    name += p.similarity;
    const auto d1 = g1.degree(p.left);
    const auto d2 = g2.degree(p.right);
    nbr += (d1 == 0 && d2 == 0) ? 1.0 : static_cast<double>(std::min(d1, d2)) / static_cast<double>(std::max(d1, d2));
  }
  name /= m;
  nbr /= m;

  double path = 1.0;
  if (matching.size() >= 2) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < matching.size(); ++i) {
      const auto dist1 = g1.distances_from(matching[i].left);
      const auto dist2 = g2.distances_from(matching[i].right);
      for (std::size_t j = i + 1; j < matching.size(); ++j) {
        const auto p1 = dist1[matching[j].left];
        const auto p2 = dist2[matching[j].right];
        double term;
        if (p1 == kUnreachable && p2 == kUnreachable) {
          term = 1.0;
        } else if (p1 == kUnreachable || p2 == kUnreachable) {
          term = 0.0;
        } else {
          term = static_cast<double>(std::min(p1, p2)) / static_cast<double>(std::max(p1, p2));
        }
        total += term;
        ++count;
      }
    }
    path = total / static_cast<double>(count);
  }
  return coverage * name * nbr * path;
}
//---------------------------------------------------------------------------
/// Cosine of the angle between two sparse non-negative vectors; 0 when
/// either is all-zero.
template <typename Key>
double angular_separation(const std::map<Key, double>& u, const std::map<Key, double>& v) {
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (const auto& [k, x] : u) {
    uu += x * x;
    if (auto it = v.find(k); it != v.end()) dot += x * it->second;
  }
  for (const auto& [k, y] : v) vv += y * y;
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), 0.0, 1.0);
}

/// Document vector of a record: w * kd per matched element.
inline std::map<ElementRef, double> record_vector(const IndexRecord& rec) {
  std::map<ElementRef, double> v;
  for (const auto& m : rec.matches) v.emplace(m.element, m.w * m.kd);
  return v;
}

inline double angular_similarity(const WeightedContext& ctx, const IndexRecord& rec) {
  return angular_separation(ctx.weights, record_vector(rec));
}
//---------------------------------------------------------------------------
struct RelevanceMode {
  enum class Kind { product, blend } kind = Kind::product;
  double alpha = 0.5;

  static RelevanceMode product() { return {}; }
  static RelevanceMode blend(double alpha) { return {Kind::blend, alpha}; }
};

inline double document_relevance(double s, double index_sim, const RelevanceMode& mode = {}) {
  if (!(s >= 0.0 && s <= 1.0)) throw RangeError("method similarity outside [0,1]");
  if (!(index_sim >= 0.0 && index_sim <= 1.0)) throw RangeError("index sim outside [0,1]");
  if (mode.kind == RelevanceMode::Kind::product) return s * index_sim;
  if (!(mode.alpha >= 0.0 && mode.alpha <= 1.0)) throw RangeError("alpha must lie in [0,1]");
  return mode.alpha * s + (1.0 - mode.alpha) * index_sim;
}
//---------------------------------------------------------------------------
enum class RankMethod { graph, weight };

struct RankParams {
  RankMethod method = RankMethod::graph;
  double theta = 0.6;
  std::size_t l_max = 2;
  RelevanceMode relevance;

  void validate() const {
    if (!(theta >= 0.0 && theta <= 1.0)) throw RangeError("theta must lie in [0,1]");
    if (relevance.kind == RelevanceMode::Kind::blend && !(relevance.alpha >= 0.0 && relevance.alpha <= 1.0)) {
      throw RangeError("alpha must lie in [0,1]");
    }
  }
};

struct RankedResult {
  std::string doc_id;
  double s = 0.0;
  double index_sim = 0.0;
  double relevance = 0.0;
};

/// Scores every record and sorts by relevance (descending), then doc_id.
inline std::vector<RankedResult> rank_documents(const Index& index, const Ontology& ont, const AbstractContext& ctx,
                                                const RankParams& params = {}) {
  params.validate();
  for (const auto& c : ctx.classes()) ont.require(c);

  std::vector<RankedResult> out;
  out.reserve(index.records.size());
  if (params.method == RankMethod::graph) {
    const auto context_graph = LabeledGraph::from_fragment(ctx.as_fragment());
    for (const auto& rec : index.records) {
      const double s = graph_similarity(LabeledGraph::from_fragment(rec.fragment), context_graph, params.theta);
      out.push_back({rec.doc_id, s, rec.sim, document_relevance(s, rec.sim, params.relevance)});
    }
  } else {
    const auto weights = context_weights(ont, ctx, params.l_max);
    for (const auto& rec : index.records) {
      const double s = angular_similarity(weights, rec);
      out.push_back({rec.doc_id, s, rec.sim, document_relevance(s, rec.sim, params.relevance)});
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedResult& a, const RankedResult& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.doc_id < b.doc_id;
  });
  return out;
}
//---------------------------------------------------------------------------
}  // namespace ontodex
