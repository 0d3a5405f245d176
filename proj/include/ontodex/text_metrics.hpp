#pragma once
//---------------------------------------------------------------------------
// String primitives shared by every stage: UTF-8 handling, name
// normalization, Levenshtein distance, and token-set overlap.
//---------------------------------------------------------------------------
#include <algorithm>
#include <cstddef>
#include <istream>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ontodex {
//---------------------------------------------------------------------------
namespace utf8 {

/// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences decode
/// to U+FFFD one byte at a time.
inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char b = p[i];
    char32_t cp = 0;
    std::size_t len = 0;
    if (b < 0x80) {
      cp = b;
      len = 1;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append(out, cp);
  return out;
}

}  // namespace utf8
//---------------------------------------------------------------------------
/// Simple one-to-one case folding for Latin, Latin-1, Greek and Cyrillic.
/// Other scripts pass through unchanged.
constexpr char32_t fold_case(char32_t c) noexcept {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

constexpr bool is_space(char32_t c) noexcept {
  return c == U' ' || (c >= U'\t' && c <= U'\r') || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

/// Word characters for tokenization: ASCII letters and digits, plus any
/// non-ASCII code point outside the common punctuation and symbol blocks.
constexpr bool is_word_char(char32_t c) noexcept {
  if (c < 0x80) {
    return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  }
  if (c <= 0xBF || c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c == 0xFFFD) return false;
  return true;
}
//---------------------------------------------------------------------------
/// Canonical form of a name: case-folded, underscores read as spaces,
/// whitespace runs collapsed to one space, trimmed.
inline std::string normalize(std::string_view s) {
  std::u32string folded;
  bool pending_space = false;
  for (char32_t c : utf8::decode(s)) {
    if (c == U'_' || is_space(c)) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) {
      folded.push_back(U' ');
      pending_space = false;
    }
    folded.push_back(fold_case(c));
  }
  return utf8::encode(folded);
}
//---------------------------------------------------------------------------
/// Edit distance with unit-cost insert, delete and substitute.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Distance over Unicode scalar values of two UTF-8 strings.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(utf8::decode(a)), std::u32string_view(utf8::decode(b)));
}

/// 1 - distance / longer length, in [0,1]; two empty strings are identical.
inline double name_similarity(std::string_view a, std::string_view b) {
  const auto ua = utf8::decode(a);
  const auto ub = utf8::decode(b);
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}
//---------------------------------------------------------------------------
/// Case-folded tokens split at every non-word character, in text order.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : utf8::decode(text)) {
    if (is_word_char(c)) {
      utf8::append(current, fold_case(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}
//---------------------------------------------------------------------------
class StopWordList {
 public:
  StopWordList() = default;

  template <typename Range>
  explicit StopWordList(const Range& words) {
    for (const auto& w : words) add(w);
  }

  /// Small English list used when no stop-word file is supplied.
  static StopWordList english() {
    static constexpr std::string_view kWords[] = {
        "a",    "about", "an",   "and",   "are",  "as",    "at",   "be",    "been",  "but",
        "by",   "can",   "for",  "from",  "had",  "has",   "have", "he",    "her",   "his",
        "i",    "if",    "in",   "into",  "is",   "it",    "its",  "not",   "of",    "on",
        "or",   "she",   "so",   "such",  "that", "the",   "their", "then", "there", "these",
        "they", "this",  "to",   "was",   "we",   "were",  "what", "when",  "which", "who",
        "will", "with",  "would", "you"};
    return StopWordList(kWords);
  }

  /// One word per line; blank lines are skipped.
  static StopWordList read(std::istream& in) {
    StopWordList list;
    std::string line;
    while (std::getline(in, line)) list.add(line);
    return list;
  }

  void add(std::string_view word) {
    auto w = normalize(word);
    if (!w.empty()) words_.insert(std::move(w));
  }

  bool contains(std::string_view token) const { return words_.find(std::string(token)) != words_.end(); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<std::string>& words() const noexcept { return words_; }

 private:
  std::set<std::string> words_;
};

/// Distinct tokens of `text` with stop words removed.
inline std::set<std::string> content_terms(std::string_view text, const StopWordList& stops) {
  std::set<std::string> terms;
  for (auto& t : tokenize(text)) {
    if (!stops.contains(t)) terms.insert(std::move(t));
  }
  return terms;
}

/// Jaccard coefficient of the content-term sets; 0 when either is empty.
inline double description_overlap(std::string_view description, std::string_view doc_text,
                                  const StopWordList& stops) {
  const auto a = content_terms(description, stops);
  const auto b = content_terms(doc_text, stops);
  if (a.empty() || b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : a) common += b.count(t);
  const std::size_t joined = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(joined);
}
//---------------------------------------------------------------------------
}  // namespace ontodex
