#pragma once
//---------------------------------------------------------------------------
// Index persistence as JSON Lines: one header line, then one record per
// document in doc_id order. Reals are written with 12 significant digits.
//---------------------------------------------------------------------------
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ontodex/error.hpp"
#include "ontodex/topic_indexer.hpp"

namespace ontodex {

inline constexpr std::string_view kIndexFormat = "ontodex-index";
inline constexpr int kIndexVersion = 1;

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson record_to_json(const IndexRecord& rec) {
  ojson matches = ojson::array();
  for (const auto& m : rec.matches) {
    ojson jm;
    jm["element"] = m.element.name;
    jm["kind"] = std::string(to_string(m.element.kind));
    if (m.element.kind == ElementKind::attribute) jm["owner"] = m.element.owner;
    jm["matched_name"] = m.matched_name;
    jm["distance"] = m.distance;
    jm["w"] = persisted_real(m.w);
    jm["kd"] = persisted_real(m.kd);
    matches.push_back(std::move(jm));
  }
  ojson relations = ojson::array();
  for (const auto& r : rec.fragment.relations) {
    relations.push_back({{"from", r.from}, {"to", r.to}, {"kind", std::string(to_string(r.kind))}});
  }
  ojson j;
  j["doc_id"] = rec.doc_id;
  j["sim"] = persisted_real(rec.sim);
  j["matches"] = std::move(matches);
  j["fragment"] = {{"classes", rec.fragment.classes}, {"relations", std::move(relations)}};
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

inline IndexRecord record_from_json(const nlohmann::json& j, const IndexParams& params) {
  if (!j.is_object()) throw ParseError("record must be a JSON object");
  IndexRecord rec;
  rec.doc_id = field<std::string>(j, "doc_id");
  rec.sim = field<double>(j, "sim");
  if (!(rec.sim >= 0.0 && rec.sim <= 1.0)) throw ValidationError("sim outside [0,1]");
  auto matches = field<nlohmann::json>(j, "matches");
  if (!matches.is_array()) throw ParseError("field 'matches' must be an array");
  for (const auto& jm : matches) {
    if (!jm.is_object()) throw ParseError("match must be a JSON object");
    ElementMatch m;
    m.element.name = field<std::string>(jm, "element");
    const auto kind = field<std::string>(jm, "kind");
    if (kind == "class") {
      m.element.kind = ElementKind::klass;
    } else if (kind == "attribute") {
      m.element.kind = ElementKind::attribute;
      m.element.owner = field<std::string>(jm, "owner");
    } else {
      throw ParseError("unknown element kind '" + kind + "'");
    }
    m.matched_name = field<std::string>(jm, "matched_name");
    m.distance = field<std::size_t>(jm, "distance");
    m.w = field<double>(jm, "w");
    m.kd = field<double>(jm, "kd");
    if (m.distance >= params.d_max) throw ValidationError("match distance not below d_max");
    if (!(m.w >= 0.0)) throw ValidationError("negative element weight");
    if (!(m.kd >= 0.0 && m.kd <= 1.0)) throw ValidationError("kd outside [0,1]");
    rec.matches.push_back(std::move(m));
  }
  rec.fragment = fragment_from_json(field<nlohmann::json>(j, "fragment"));
  return rec;
}

}  // namespace detail

/// Writes the header line and one line per record.
inline void save_index(const Index& index, std::ostream& out) {
  detail::ojson header;
  header["format"] = std::string(kIndexFormat);
  header["version"] = kIndexVersion;
  header["params"] = {{"k", persisted_real(index.params.k)},
                      {"d_max", index.params.d_max},
                      {"cs_max_mode", std::string(to_string(index.params.cs_max_mode))},
                      {"cs_max", index.cs_max}};
  header["ontology_hash"] = index.ontology_hash;
  header["corpus_hash"] = index.corpus_hash;
  header["record_count"] = index.records.size();
  out << header.dump() << '\n';
  for (const auto& rec : index.records) out << detail::record_to_json(rec).dump() << '\n';
}

inline std::string save_index_string(const Index& index) {
  std::ostringstream os;
  save_index(index, os);
  return os.str();
}

/// Reads an index written by save_index. Malformed lines raise ParseError
/// with the line number; a wrong format tag or version raises VersionError;
/// a record count short of the header's raises ParseError (truncation).
inline Index load_index(std::istream& in) {
  Index index;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("index: empty file", 1);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("index header: ") + e.what(), 1);
  }
  std::size_t expected = 0;
  try {
    if (!header.is_object()) throw ParseError("header must be a JSON object");
    if (!header.contains("format") || header["format"] != kIndexFormat) {
      throw VersionError("index: not an " + std::string(kIndexFormat) + " file");
    }
    const int version = detail::field<int>(header, "version");
    if (version != kIndexVersion) {
      throw VersionError("index: unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(kIndexVersion) + ")");
    }
    const auto params = detail::field<nlohmann::json>(header, "params");
    index.params.k = detail::field<double>(params, "k");
    index.params.d_max = detail::field<std::size_t>(params, "d_max");
    const auto mode_name = detail::field<std::string>(params, "cs_max_mode");
    auto mode = parse_cs_max_mode(mode_name);
    if (!mode) throw ParseError("unknown cs_max_mode '" + mode_name + "'");
    index.params.cs_max_mode = *mode;
    index.cs_max = detail::field<std::size_t>(params, "cs_max");
    index.params.validate();
    index.ontology_hash = detail::field<std::string>(header, "ontology_hash");
    index.corpus_hash = detail::field<std::string>(header, "corpus_hash");
    expected = detail::field<std::size_t>(header, "record_count");
  } catch (const VersionError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("index header: ") + e.what(), 1);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto rec = detail::record_from_json(nlohmann::json::parse(line), index.params);
      if (!index.records.empty() && !(index.records.back().doc_id < rec.doc_id)) {
        throw ValidationError("records not in strictly increasing doc_id order at '" + rec.doc_id + "'");
      }
      index.records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("index: ") + e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(std::string("index: ") + e.what(), line_no);
    }
  }
  if (index.records.size() != expected) {
    throw ParseError("index: header announces " + std::to_string(expected) + " records but " +
                         std::to_string(index.records.size()) + " were read (truncated file?)",
                     line_no);
  }
  return index;
}

}  // namespace ontodex
