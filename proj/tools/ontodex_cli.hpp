#pragma once
// Command-line front end: build-index, select-fragment, rank, inspect.
// Data goes to `out`, diagnostics and reports to `err`.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ontodex/ontodex.hpp"

namespace ontodex::cli {

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

/// Runs a loader on a file, prefixing its errors with the path.
template <typename Loader>
auto read_file(const std::string& path, Loader&& load) {
  auto in = open_input(path);
  try {
    return load(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline std::string fmt(double x, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

/// Linear-interpolated quantile of sorted values.
inline double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

struct BuildConfig {
  std::string ontology;
  std::string corpus;
  std::string categories;
  std::string stopwords;
  std::string synonyms;
  std::string index;
  double k = 0.5;
  std::size_t d_max = 3;
  std::string cs_max_mode = "global";
  unsigned threads = 0;
};

inline int cmd_build_index(const BuildConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  IndexParams params;
  params.k = cfg.k;
  params.d_max = cfg.d_max;
  params.cs_max_mode = parse_cs_max_mode(cfg.cs_max_mode).value();
  params.validate();

  const auto ont = detail::read_file(cfg.ontology, [](std::istream& in) { return load_ontology(in); });
  auto docs = detail::read_file(cfg.corpus, [](std::istream& in) { return load_corpus(in); });
  CategoryGraph graph;
  if (!cfg.categories.empty()) {
    graph = detail::read_file(cfg.categories, [](std::istream& in) { return load_category_graph(in); });
  }
  BuildOptions options;
  options.threads = cfg.threads;
  if (!cfg.stopwords.empty()) {
    options.stops = detail::read_file(cfg.stopwords, [](std::istream& in) { return StopWordList::read(in); });
  }
  if (!cfg.synonyms.empty()) {
    options.synonyms = detail::read_file(cfg.synonyms, [](std::istream& in) { return load_synonyms(in); });
  }
  const Corpus corpus(std::move(docs), std::move(graph));
  auto result = build_index(corpus, ont, params, options);

  if (cfg.index == "-") {
    save_index(result.index, out);
  } else {
    std::ofstream file(cfg.index, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write '" + cfg.index + "'");
    save_index(result.index, file);
    if (!file.flush()) throw Error("write failed for '" + cfg.index + "'");
  }

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  err << "documents: " << corpus.size() << "\n"
      << "records: " << result.index.records.size() << "\n"
      << "matches: " << result.total_matches << "\n"
      << "cs_max: " << result.index.cs_max << " (" << to_string(params.cs_max_mode) << ")\n";
  if (corpus.missing_categories() > 0) {
    err << "warning: " << corpus.missing_categories() << " document categories missing from the category graph\n";
  }
  for (const auto& e : result.errors) err << "error: document '" << e.doc_id << "': " << e.message << "\n";
  err << "errors: " << result.errors.size() << "\n"
      << "elapsed_ms: " << elapsed << "\n";
  return result.errors.empty() ? 0 : 1;
}

inline int cmd_select_fragment(const std::string& ontology_path, const std::vector<std::string>& classes,
                               std::ostream& out, std::ostream& err) {
  const auto ont = detail::read_file(ontology_path, [](std::istream& in) { return load_ontology(in); });
  const auto selection = select_fragment(ont, classes);
  auto j = to_json(selection.fragment);
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : selection.fragment.attributes(ont)) attrs.push_back({{"class", a.owner}, {"name", a.name}});
  j["attributes"] = std::move(attrs);
  out << j.dump() << "\n";
  for (const auto& [a, b] : selection.unreachable) {
    err << "unreachable: '" << a << "' and '" << b << "' are not connected\n";
  }
  return 0;
}

struct RankConfig {
  std::string index;
  std::string ontology;
  std::string context;
  std::string method = "graph";
  double theta = 0.6;
  std::size_t l_max = 2;
  std::string relevance_mode = "product";
  double alpha = 0.5;
  std::string format = "jsonl";
};

inline int cmd_rank(const RankConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ont = detail::read_file(cfg.ontology, [](std::istream& in) { return load_ontology(in); });
  const auto index = detail::read_file(cfg.index, [](std::istream& in) { return load_index(in); });
  const auto ctx = detail::read_file(cfg.context, [&](std::istream& in) { return load_context(in, ont); });
  if (index.ontology_hash != ontology_hash(ont)) {
    throw ValidationError("index '" + cfg.index + "' was built against a different ontology");
  }

  RankParams params;
  params.method = cfg.method == "weight" ? RankMethod::weight : RankMethod::graph;
  params.theta = cfg.theta;
  params.l_max = cfg.l_max;
  params.relevance = cfg.relevance_mode == "blend" ? RelevanceMode::blend(cfg.alpha) : RelevanceMode::product();
  const auto ranked = rank_documents(index, ont, ctx, params);

  if (cfg.format == "table") {
    std::size_t width = 6;
    for (const auto& r : ranked) width = std::max(width, r.doc_id.size());
    out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(width) + 2) << "doc_id"
        << std::setw(12) << "s" << std::setw(12) << "index_sim"
        << "relevance\n";
    std::size_t rank = 0;
    for (const auto& r : ranked) {
      out << std::left << std::setw(6) << ++rank << std::setw(static_cast<int>(width) + 2) << r.doc_id
          << std::setw(12) << detail::fmt(r.s, "%.6f") << std::setw(12) << detail::fmt(r.index_sim, "%.6f")
          << detail::fmt(r.relevance, "%.6f") << "\n";
    }
  } else {
    for (const auto& r : ranked) {
      nlohmann::ordered_json j;
      j["doc_id"] = r.doc_id;
      j["s"] = persisted_real(r.s);
      j["index_sim"] = persisted_real(r.index_sim);
      j["relevance"] = persisted_real(r.relevance);
      out << j.dump() << "\n";
    }
  }
  err << "ranked: " << ranked.size() << " documents\n";
  return 0;
}

inline int cmd_inspect(const std::string& index_path, const std::string& doc_id, std::ostream& out,
                       std::ostream& err) {
  (void)err;
  const auto index = detail::read_file(index_path, [](std::istream& in) { return load_index(in); });
  if (!doc_id.empty()) {
    const auto* rec = index.find(doc_id);
    if (!rec) throw Error("no record for document '" + doc_id + "'");
    out << "doc_id: " << rec->doc_id << "\n"
        << "sim: " << detail::fmt(rec->sim) << "\n"
        << "d_sum: " << rec->d_sum() << "\n"
        << "matches: " << rec->matches.size() << "\n";
    for (const auto& m : rec->matches) {
      out << "  " << to_string(m.element.kind) << " '" << m.element.name << "'";
      if (m.element.kind == ElementKind::attribute) out << " of '" << m.element.owner << "'";
      out << " <- '" << m.matched_name << "' distance=" << m.distance << " w=" << detail::fmt(m.w)
          << " kd=" << detail::fmt(m.kd) << "\n";
    }
    out << "fragment classes:";
    for (const auto& c : rec->fragment.classes) out << " '" << c << "'";
    out << "\nfragment relations:\n";
    for (const auto& r : rec->fragment.relations) {
      out << "  '" << r.from << "' -> '" << r.to << "' (" << to_string(r.kind) << ")\n";
    }
    return 0;
  }
  std::vector<double> sims;
  for (const auto& r : index.records) sims.push_back(r.sim);
  std::sort(sims.begin(), sims.end());
  out << "format: " << kIndexFormat << " v" << kIndexVersion << "\n"
      << "params: k=" << detail::fmt(index.params.k) << " d_max=" << index.params.d_max
      << " cs_max_mode=" << to_string(index.params.cs_max_mode) << " cs_max=" << index.cs_max << "\n"
      << "ontology_hash: " << index.ontology_hash << "\n"
      << "corpus_hash: " << index.corpus_hash << "\n"
      << "records: " << index.records.size() << "\n";
  if (!sims.empty()) {
    out << "sim quartiles: min=" << detail::fmt(sims.front(), "%.6f")
        << " q1=" << detail::fmt(detail::quantile(sims, 0.25), "%.6f")
        << " median=" << detail::fmt(detail::quantile(sims, 0.5), "%.6f")
        << " q3=" << detail::fmt(detail::quantile(sims, 0.75), "%.6f") << " max=" << detail::fmt(sims.back(), "%.6f")
        << "\n";
  }
  return 0;
}

inline constexpr const char* kFormatsHelp = R"(File formats:
  ontology    JSON {"classes":[{"name","description","attributes":[{"name","description"}]}],
                    "relations":[{"from","to","kind":"associative"|"taxonomical"|"hierarchical"}]}
  corpus      JSON Lines, one {"id","title","categories":[...],"text","metadata":{...}?} per line
  categories  JSON {"categories":[...],"edges":[{"child","parent"}]}
  stopwords   plain text, one word per line (default: built-in English list)
  synonyms    JSON {"element name":["synonym",...]}
  context     JSON {"classes":[...],"attributes":[{"class","name"}]?}
  index       JSON Lines: header {"format":"ontodex-index","version":1,...} then one record per document)";

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ontodex: index documents against an ontology and rank them for a context"};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);

  BuildConfig build;
  auto* build_cmd = app.add_subcommand("build-index", "Index a corpus against an ontology");
  build_cmd->add_option("--ontology", build.ontology, "Ontology JSON file")->required();
  build_cmd->add_option("--corpus", build.corpus, "Corpus JSON Lines file")->required();
  build_cmd->add_option("--categories", build.categories, "Category graph JSON file");
  build_cmd->add_option("--stopwords", build.stopwords, "Stop-word list, one word per line");
  build_cmd->add_option("--synonyms", build.synonyms, "Synonym table JSON file");
  build_cmd->add_option("--index", build.index, "Output index file ('-' for standard output)")->required();
  build_cmd->add_option("--k", build.k, "Weight coefficient k in [0,1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  build_cmd->add_option("--dmax", build.d_max, "Maximum Levenshtein distance D_max (>= 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build_cmd->add_option("--cs-max-mode", build.cs_max_mode, "global | local-max")
      ->check(CLI::IsMember({"global", "local-max"}))
      ->capture_default_str();
  build_cmd->add_option("--threads", build.threads, "Worker threads (0 = hardware concurrency)");

  std::string fragment_ontology;
  std::vector<std::string> fragment_classes;
  auto* fragment_cmd = app.add_subcommand("select-fragment", "Select the ontology fragment joining seed classes");
  fragment_cmd->add_option("--ontology", fragment_ontology, "Ontology JSON file")->required();
  fragment_cmd->add_option("--classes", fragment_classes, "Seed class (repeatable)")->required();

  RankConfig rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank indexed documents against an abstract context");
  rank_cmd->add_option("--index", rank.index, "Index file")->required();
  rank_cmd->add_option("--ontology", rank.ontology, "Ontology JSON file the index was built with")->required();
  rank_cmd->add_option("--context", rank.context, "Context JSON file")->required();
  rank_cmd->add_option("--method", rank.method, "graph | weight")
      ->check(CLI::IsMember({"graph", "weight"}))
      ->capture_default_str();
  rank_cmd->add_option("--theta", rank.theta, "Node matching threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  rank_cmd->add_option("--lmax", rank.l_max, "Maximum path length for context weights")->capture_default_str();
  rank_cmd->add_option("--relevance-mode", rank.relevance_mode, "product | blend")
      ->check(CLI::IsMember({"product", "blend"}))
      ->capture_default_str();
  rank_cmd->add_option("--alpha", rank.alpha, "Blend weight of s in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  rank_cmd->add_option("--format", rank.format, "jsonl | table")
      ->check(CLI::IsMember({"jsonl", "table"}))
      ->capture_default_str();

  std::string inspect_index;
  std::string inspect_doc;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize an index or show one record");
  inspect_cmd->add_option("--index", inspect_index, "Index file")->required();
  inspect_cmd->add_option("--doc", inspect_doc, "Document id to show");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*build_cmd) return cmd_build_index(build, out, err);
    if (*fragment_cmd) return cmd_select_fragment(fragment_ontology, fragment_classes, out, err);
    if (*rank_cmd) return cmd_rank(rank, out, err);
    if (*inspect_cmd) return cmd_inspect(inspect_index, inspect_doc, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ontodex::cli
