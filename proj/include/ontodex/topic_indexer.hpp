#pragma once
//---------------------------------------------------------------------------
// Topic-based indexing of documents against the ontology.
//
// For each document the candidate names (title, categories, parent
// categories) are compared with every ontology class and attribute name by
// edit distance. Pairs closer than d_max are the document's matches; their
// count and total distance feed the document-to-ontology similarity, and
// the matched classes seed the document's ontology fragment.
//---------------------------------------------------------------------------
#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontodex/corpus.hpp"
#include "ontodex/error.hpp"
#include "ontodex/ontology.hpp"
#include "ontodex/text_metrics.hpp"

namespace ontodex {
//---------------------------------------------------------------------------
enum class ElementKind { klass, attribute };

inline std::string_view to_string(ElementKind k) { return k == ElementKind::klass ? "class" : "attribute"; }

/// A class (owner empty) or an attribute of `owner`.
struct ElementRef {
  std::string name;
  ElementKind kind = ElementKind::klass;
  std::string owner;

  static ElementRef of_class(std::string name) { return {std::move(name), ElementKind::klass, {}}; }
  static ElementRef of_attribute(std::string owner, std::string name) {
    return {std::move(name), ElementKind::attribute, std::move(owner)};
  }

  /// The class this element belongs to.
  const std::string& class_name() const noexcept { return kind == ElementKind::klass ? name : owner; }

  friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};
//---------------------------------------------------------------------------
struct IndexParams {
  double k = 0.5;
  std::size_t d_max = 3;
  CsMaxMode cs_max_mode = CsMaxMode::global;

  void validate() const {
    if (!(k >= 0.0 && k <= 1.0)) throw RangeError("k must lie in [0,1]");
    if (d_max < 1) throw RangeError("d_max must be at least 1");
  }

  friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

/// Element name -> synonyms, all normalized. A synonym matches exactly like
/// the element name it stands for.
using SynonymTable = std::map<std::string, std::vector<std::string>>;

/// Reads {"element name": ["synonym", ...], ...}.
inline SynonymTable load_synonyms(std::istream& in) {
  SynonymTable table;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ParseError("synonyms: expected a JSON object");
    for (const auto& [name, list] : j.items()) {
      auto& out = table[normalize(name)];
      for (const auto& s : list.get<std::vector<std::string>>()) {
        if (auto n = normalize(s); !n.empty()) out.push_back(std::move(n));
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("synonyms: ") + e.what());
  }
  return table;
}
//---------------------------------------------------------------------------
/// Every class and attribute of an ontology with its decoded match names
/// (the name itself first, then synonyms), in ElementRef order.
class ElementTable {
 public:
  struct Entry {
    ElementRef ref;
    std::string description;
    std::vector<std::u32string> names;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
  };

  explicit ElementTable(const Ontology& ont, const SynonymTable& synonyms = {}) {
    auto add = [&](ElementRef ref, const std::string& description) {
      Entry e{std::move(ref), description, {}, 0, 0};
      e.names.push_back(utf8::decode(e.ref.name));
      if (auto it = synonyms.find(e.ref.name); it != synonyms.end()) {
        for (const auto& s : it->second) e.names.push_back(utf8::decode(s));
      }
      e.min_len = e.max_len = e.names.front().size();
      for (const auto& n : e.names) {
        e.min_len = std::min(e.min_len, n.size());
        e.max_len = std::max(e.max_len, n.size());
      }
      entries_.push_back(std::move(e));
    };
    for (const auto& c : ont.classes()) {
      add(ElementRef::of_class(c.name), c.description);
      for (const auto& a : c.attributes) add(ElementRef::of_attribute(c.name, a.name), a.description);
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) { return x.ref < y.ref; });
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  const Entry* find(const ElementRef& ref) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), ref,
                               [](const Entry& e, const ElementRef& r) { return e.ref < r; });
    return it != entries_.end() && it->ref == ref ? &*it : nullptr;
  }

 private:
  std::vector<Entry> entries_;
};
//---------------------------------------------------------------------------
struct NameMatch {
  ElementRef element;
  std::string matched_name;
  std::size_t distance = 0;

  friend bool operator==(const NameMatch&, const NameMatch&) = default;
};

struct MatchResult {
  std::vector<NameMatch> matches;
  std::size_t d_sum = 0;
};

/// One entry per (candidate name, element) pair closer than d_max. With
/// synonyms, the pair's distance is the smallest over the element's names.
/// Sorted by element, then matched name.
inline MatchResult match_elements(const std::set<std::string>& cs, const ElementTable& table, std::size_t d_max) {
  MatchResult out;
  std::vector<std::u32string> candidates;
  candidates.reserve(cs.size());
  for (const auto& c : cs) candidates.push_back(utf8::decode(c));

  for (const auto& e : table.entries()) {
    std::size_t i = 0;
    for (const auto& c : cs) {
      const auto& cu = candidates[i++];
      // Length difference bounds the distance from below.
      if (cu.size() + d_max <= e.min_len || e.max_len + d_max <= cu.size()) continue;
      std::size_t best = d_max;
      for (const auto& n : e.names) {
        const std::size_t gap = cu.size() > n.size() ? cu.size() - n.size() : n.size() - cu.size();
        if (gap >= best) continue;
        best = std::min(best, levenshtein(std::u32string_view(cu), std::u32string_view(n)));
      }
      if (best < d_max) {
        out.matches.push_back({e.ref, c, best});
        out.d_sum += best;
      }
    }
  }
  return out;
}

inline MatchResult match_elements(const std::set<std::string>& cs, const Ontology& ont, std::size_t d_max,
                                  const SynonymTable& synonyms = {}) {
  return match_elements(cs, ElementTable(ont, synonyms), d_max);
}
//---------------------------------------------------------------------------
/// Document-to-ontology similarity from the number of matched pairs and
/// their total edit distance:
///
///   sim = 1 - 1/2 [ (1-k) n_pair / (cs_max n_ont) + k (1 - d_sum / (d_max n_pair)) ]
///
/// and sim = 1 when nothing matched. Precondition violations throw
/// RangeError instead of being clamped.
inline double compute_sim(std::size_t n_pair, std::size_t d_sum, const IndexParams& p, std::size_t cs_max,
                          std::size_t n_ont) {
  p.validate();
  if (cs_max < 1) throw RangeError("cs_max must be at least 1");
  if (n_ont < 1) throw RangeError("ontology must have at least one element");
  if (n_pair > cs_max * n_ont) {
    throw RangeError("matched pairs (" + std::to_string(n_pair) + ") exceed cs_max * |ONT| (" +
                     std::to_string(cs_max * n_ont) + ")");
  }
  if (d_sum > p.d_max * n_pair) throw RangeError("distance sum exceeds d_max * matched pairs");
  if (n_pair == 0) return 1.0;
  const double coverage = static_cast<double>(n_pair) / (static_cast<double>(cs_max) * static_cast<double>(n_ont));
  const double closeness = 1.0 - static_cast<double>(d_sum) / (static_cast<double>(p.d_max) * static_cast<double>(n_pair));
  return 1.0 - 0.5 * ((1.0 - p.k) * coverage + p.k * closeness);
}
//---------------------------------------------------------------------------
/// Token stream of a document (title then text) with a position list per
/// token, for counting multi-word name occurrences.
class DocumentTerms {
 public:
  explicit DocumentTerms(const Document& doc) {
    tokens_ = tokenize(doc.title);
    auto body = tokenize(doc.text);
    tokens_.insert(tokens_.end(), std::make_move_iterator(body.begin()), std::make_move_iterator(body.end()));
    for (std::size_t i = 0; i < tokens_.size(); ++i) positions_[tokens_[i]].push_back(i);
  }

  std::size_t size() const noexcept { return tokens_.size(); }

  /// Occurrences of the token sequence of `name`.
  std::size_t count(std::string_view name) const {
    const auto needle = tokenize(name);
    if (needle.empty()) return 0;
    auto it = positions_.find(needle.front());
    if (it == positions_.end()) return 0;
    std::size_t n = 0;
    for (std::size_t p : it->second) {
      if (p + needle.size() > tokens_.size()) break;
      if (std::equal(needle.begin() + 1, needle.end(), tokens_.begin() + static_cast<std::ptrdiff_t>(p) + 1)) ++n;
    }
    return n;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::vector<std::size_t>> positions_;
};

/// Document frequencies of every ontology element name over one corpus.
class CorpusStats {
 public:
  CorpusStats() = default;

  CorpusStats(const Corpus& corpus, const Ontology& ont) : documents_(corpus.size()) {
    std::set<std::string> names;
    for (const auto& c : ont.classes()) {
      names.insert(c.name);
      for (const auto& a : c.attributes) names.insert(a.name);
    }
    for (const auto& d : corpus.documents()) {
      const DocumentTerms terms(d);
      for (const auto& n : names) {
        if (terms.count(n) > 0) ++df_[n];
      }
    }
  }

  std::size_t documents() const noexcept { return documents_; }

  std::size_t df(const std::string& name) const {
    auto it = df_.find(name);
    return it == df_.end() ? 0 : it->second;
  }

 private:
  std::size_t documents_ = 0;
  std::map<std::string, std::size_t> df_;
};

/// w_ji = tf * ln(1 + N/df), tf = occurrences / token count.
inline double element_weight(std::string_view name, const DocumentTerms& terms, const CorpusStats& stats) {
  if (terms.size() == 0) return 0.0;
  const std::size_t occurrences = terms.count(name);
  const std::size_t df = stats.df(std::string(name));
  if (occurrences == 0 || df == 0) return 0.0;
  const double tf = static_cast<double>(occurrences) / static_cast<double>(terms.size());
  return tf * std::log(1.0 + static_cast<double>(stats.documents()) / static_cast<double>(df));
}

inline double element_weight(const ElementRef& e, const Document& doc, const CorpusStats& stats) {
  return element_weight(e.name, DocumentTerms(doc), stats);
}

/// kd_ji: description overlap with the text, or name containment (0/1)
/// when the element has no description.
inline double description_coefficient(std::string_view element_name, std::string_view description,
                                      const Document& doc, const DocumentTerms& terms,
                                      const StopWordList& stops) {
  if (normalize(description).empty()) return terms.count(element_name) > 0 ? 1.0 : 0.0;
  return description_overlap(description, doc.text, stops);
}
//---------------------------------------------------------------------------
/// Rounds to the 12 significant digits kept by the index file, so that the
/// in-memory index and its persisted form compare equal.
inline double persisted_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

struct ElementMatch {
  ElementRef element;
  std::string matched_name;
  std::size_t distance = 0;
  double w = 0.0;
  double kd = 0.0;

  friend bool operator==(const ElementMatch&, const ElementMatch&) = default;
};

struct IndexRecord {
  std::string doc_id;
  double sim = 1.0;
  std::vector<ElementMatch> matches;
  OntologyFragment fragment;

  std::size_t d_sum() const {
    std::size_t s = 0;
    for (const auto& m : matches) s += m.distance;
    return s;
  }

  friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

struct Index {
  IndexParams params;
  std::size_t cs_max = 1;
  std::string ontology_hash;
  std::string corpus_hash;
  std::vector<IndexRecord> records;

  const IndexRecord* find(std::string_view doc_id) const {
    auto it = std::lower_bound(records.begin(), records.end(), doc_id,
                               [](const IndexRecord& r, std::string_view id) { return r.doc_id < id; });
    return it != records.end() && it->doc_id == doc_id ? &*it : nullptr;
  }

  friend bool operator==(const Index&, const Index&) = default;
};

/// Inputs shared by every document of one indexing run.
struct IndexingContext {
  const Ontology& ontology;
  const CategoryGraph& categories;
  const ElementTable& elements;
  const CorpusStats& stats;
  const StopWordList& stops;
  IndexParams params;
  std::size_t cs_max = 1;
};

/// Seed classes of a match list: matched classes plus owners of matched
/// attributes.
inline std::vector<std::string> fragment_seed(const std::vector<ElementMatch>& matches) {
  std::set<std::string> seed;
  for (const auto& m : matches) seed.insert(m.element.class_name());
  return {seed.begin(), seed.end()};
}

inline IndexRecord index_document(const Document& doc, const IndexingContext& ctx) {
  const auto cs = candidate_names(doc, ctx.categories);
  auto found = match_elements(cs, ctx.elements, ctx.params.d_max);

  IndexRecord rec;
  rec.doc_id = doc.id;
  rec.sim = persisted_real(
      compute_sim(found.matches.size(), found.d_sum, ctx.params, ctx.cs_max, ctx.ontology.element_count()));

  const DocumentTerms terms(doc);
  for (auto& m : found.matches) {
    const auto* entry = ctx.elements.find(m.element);
    ElementMatch em{std::move(m.element), std::move(m.matched_name), m.distance, 0.0, 0.0};
    em.w = persisted_real(element_weight(em.element.name, terms, ctx.stats));
    em.kd = persisted_real(
        description_coefficient(em.element.name, entry ? entry->description : std::string(), doc, terms, ctx.stops));
    rec.matches.push_back(std::move(em));
  }

  const auto seed = fragment_seed(rec.matches);
  if (!seed.empty()) rec.fragment = select_fragment(ctx.ontology, seed).fragment;
  return rec;
}
//---------------------------------------------------------------------------
/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string ontology_hash(const Ontology& ont) { return fnv1a_hex(to_json(ont).dump()); }

/// Order-independent: documents are hashed sorted by id.
inline std::string corpus_hash(const Corpus& corpus) {
  std::vector<const Document*> docs;
  for (const auto& d : corpus.documents()) docs.push_back(&d);
  std::sort(docs.begin(), docs.end(), [](const Document* a, const Document* b) { return a->id < b->id; });
  std::string bytes;
  for (const auto* d : docs) bytes += to_json(*d).dump() + '\n';
  bytes += to_json(corpus.category_graph()).dump();
  return fnv1a_hex(bytes);
}
//---------------------------------------------------------------------------
struct DocumentError {
  std::string doc_id;
  std::string message;
};

struct BuildResult {
  Index index;
  std::vector<DocumentError> errors;  // sorted by doc_id
  std::size_t total_matches = 0;
};

struct BuildOptions {
  StopWordList stops = StopWordList::english();
  SynonymTable synonyms;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Indexes every document. Per-document failures are collected rather than
/// aborting the run; records come out sorted by doc_id regardless of
/// scheduling or input order.
inline BuildResult build_index(const Corpus& corpus, const Ontology& ont, const IndexParams& params,
                               const BuildOptions& options = {}) {
  params.validate();
  BuildResult out;
  out.index.params = params;
  out.index.params.k = persisted_real(params.k);
  out.index.ontology_hash = ontology_hash(ont);
  out.index.corpus_hash = corpus_hash(corpus);
  if (corpus.empty()) return out;

  out.index.cs_max = cs_max(corpus, params.cs_max_mode);
  const ElementTable elements(ont, options.synonyms);
  const CorpusStats stats(corpus, ont);
  const IndexingContext ctx{ont, corpus.category_graph(), elements, stats, options.stops, params, out.index.cs_max};

  const auto& docs = corpus.documents();
  std::vector<std::optional<IndexRecord>> records(docs.size());
  std::vector<std::string> failures(docs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      try {
        records[i] = index_document(docs[i], ctx);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, docs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (records[i]) {
      out.total_matches += records[i]->matches.size();
      out.index.records.push_back(std::move(*records[i]));
    } else {
      out.errors.push_back({docs[i].id, failures[i]});
    }
  }
  std::sort(out.index.records.begin(), out.index.records.end(),
            [](const IndexRecord& a, const IndexRecord& b) { return a.doc_id < b.doc_id; });
  std::sort(out.errors.begin(), out.errors.end(),
            [](const DocumentError& a, const DocumentError& b) { return a.doc_id < b.doc_id; });
  return out;
}
//---------------------------------------------------------------------------
}  // namespace ontodex
