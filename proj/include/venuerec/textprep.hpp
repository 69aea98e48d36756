/*
 * Copyright 2026 The venuerec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "venuerec/error.hpp"
#include "venuerec/porter.hpp"
#include "venuerec/stopwords.hpp"

namespace venuerec {

/// token -> occurrence count, ordered by token.
using TermBag = std::map<std::string, std::uint64_t>;

inline TermBag make_bag(std::span<const std::string> tokens) {
  TermBag bag;
  for (const auto& t : tokens) ++bag[t];
  return bag;
}

inline StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read stopword file " + path.string());
  StopwordSet s;
  std::string line;
  while (std::getline(in, line)) {
    std::string w;
    for (char c : line) {
      if (c == '\r' || c == ' ' || c == '\t') continue;
      w += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    }
    if (!w.empty() && w[0] != '#') s.insert(std::move(w));
  }
  return s;
}

/// Lowercases, splits on anything that is not an ASCII letter or digit
/// (bytes >= 0x80 count as word characters so UTF-8 words stay whole),
/// drops single-character tokens and stopwords, then stems.
inline std::vector<std::string> tokenize_and_stem(std::string_view text,
                                                  const StopwordSet& stopwords) {
  static const PorterStemmer stem;
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && !stopwords.count(cur)) out.push_back(stem(cur));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (c >= 'A' && c <= 'Z') {
      cur += static_cast<char>(c - 'A' + 'a');
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      cur += static_cast<char>(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

/// Keywords get the same treatment as running text, concatenated.
inline std::vector<std::string> tokenize_keywords(std::span<const std::string> keywords,
                                                  const StopwordSet& stopwords) {
  std::vector<std::string> out;
  for (const auto& k : keywords) {
    auto toks = tokenize_and_stem(k, stopwords);
    out.insert(out.end(), std::make_move_iterator(toks.begin()),
               std::make_move_iterator(toks.end()));
  }
  return out;
}

/// The pruned clustering vocabulary. Term ids follow lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Number of training documents the frequencies were counted over.
  std::size_t num_docs() const { return num_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::uint64_t df(std::uint32_t id) const { return df_[id]; }

  /// Nonzero entries of the document-term matrix restricted to this
  /// vocabulary, i.e. the sum of retained document frequencies.
  std::uint64_t nonzeros() const {
    std::uint64_t e = 0;
    for (auto d : df_) e += d;
    return e;
  }

  std::optional<std::uint32_t> id(const std::string& term) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  static Vocabulary from_terms(std::vector<std::pair<std::string, std::uint64_t>> term_df,
                               std::size_t num_docs) {
    std::sort(term_df.begin(), term_df.end());
    Vocabulary v;
    v.num_docs_ = num_docs;
    for (auto& [term, df] : term_df) {
      if (!v.ids_.emplace(term, static_cast<std::uint32_t>(v.terms_.size())).second) {
        throw DataError("duplicate vocabulary term '" + term + "'");
      }
      v.terms_.push_back(std::move(term));
      v.df_.push_back(df);
    }
    return v;
  }

  void save(std::ostream& out) const {
    out << "#vocabulary\tdocs=" << num_docs_ << "\tterms=" << terms_.size()
        << "\tnonzeros=" << nonzeros() << '\n';
    for (std::size_t i = 0; i < terms_.size(); ++i) out << terms_[i] << '\t' << df_[i] << '\n';
  }

  static Vocabulary load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("#vocabulary\t", 0) != 0) {
      throw DataError("not a vocabulary file");
    }
    auto pos = header.find("docs=");
    if (pos == std::string::npos) throw DataError("vocabulary header lacks docs=");
    std::size_t docs = std::stoull(header.substr(pos + 5));
    std::vector<std::pair<std::string, std::uint64_t>> term_df;
    std::string line;
    while (std::getline(in, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw DataError("malformed vocabulary line: " + line);
      term_df.emplace_back(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
    }
    return from_terms(std::move(term_df), docs);
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::size_t num_docs_ = 0;
};

/// Upper document-frequency bound: floor(max_df_ratio * m).
inline std::uint64_t max_df_count(double max_df_ratio, std::size_t num_docs) {
  // The epsilon absorbs representation error, e.g. 0.9 * 10.
  return static_cast<std::uint64_t>(std::floor(max_df_ratio * static_cast<double>(num_docs) + 1e-9));
}

/// Keeps the terms with min_df_count <= df <= floor(max_df_ratio * m).
inline Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs,
                                   double max_df_ratio, std::size_t min_df_count) {
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
    throw UsageError("max_df ratio must lie in (0, 1]");
  }
  if (min_df_count < 1) throw UsageError("min_df must be >= 1");
  std::unordered_map<std::string, std::uint64_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (const auto& t : doc) {
      if (seen.insert(t).second) ++df[t];
    }
  }
  const auto upper = max_df_count(max_df_ratio, docs.size());
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= min_df_count && count <= upper) kept.emplace_back(term, count);
  }
  if (kept.empty()) {
    throw DataError("empty vocabulary after pruning (" + std::to_string(df.size()) +
                    " distinct terms, df window [" + std::to_string(min_df_count) + ", " +
                    std::to_string(upper) + "]); relax --min-df or --max-df");
  }
  return Vocabulary::from_terms(std::move(kept), docs.size());
}

enum class Weighting { kTf, kTfIdf };

inline Weighting parse_weighting(std::string_view s) {
  if (s == "tf") return Weighting::kTf;
  if (s == "tfidf") return Weighting::kTfIdf;
  throw UsageError("unknown weighting '" + std::string(s) + "' (expected tf|tfidf)");
}

inline std::string_view to_string(Weighting w) { return w == Weighting::kTf ? "tf" : "tfidf"; }

/// Sparse row of the document-term matrix; entries sorted by term id with
/// no explicit zeros.
struct DocVector {
  std::string article_id;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double squared_norm() const {
    double s = 0.0;
    for (const auto& [_, w] : entries) s += w * w;
    return s;
  }
  bool is_zero() const { return entries.empty(); }
};

/// tf-idf weight is tf * ln(1 + m / df).
inline DocVector vectorize(std::string article_id, std::span<const std::string> tokens,
                           const Vocabulary& vocab, Weighting weighting, bool normalize) {
  if (vocab.empty()) throw UsageError("cannot vectorize against an empty vocabulary");
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    if (auto id = vocab.id(t)) counts[*id] += 1.0;
  }
  DocVector v{std::move(article_id), {}};
  v.entries.reserve(counts.size());
  const double m = static_cast<double>(vocab.num_docs());
  for (auto [id, tf] : counts) {
    double w = tf;
    if (weighting == Weighting::kTfIdf) {
      w *= std::log(1.0 + m / static_cast<double>(vocab.df(id)));
    }
    if (w != 0.0) v.entries.emplace_back(id, w);
  }
  if (normalize && !v.entries.empty()) {
    const double norm = std::sqrt(v.squared_norm());
    for (auto& e : v.entries) e.second /= norm;
  }
  return v;
}

}  // namespace venuerec
