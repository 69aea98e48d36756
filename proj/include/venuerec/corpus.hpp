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
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "venuerec/error.hpp"

namespace venuerec {

/// One publication record.
struct Article {
  std::string id;
  std::string venue;
  int year = 0;
  std::string title_abstract;
  std::vector<std::string> keywords;
  /// Opaque author identifiers (ORCID-like); never normalized beyond trimming.
  std::vector<std::string> authors;

  friend bool operator==(const Article&, const Article&) = default;
};

/// An immutable article collection with its per-venue article counts.
class Corpus {
 public:
  Corpus() = default;

  /// Throws DataError on a duplicate article id or an invalid article.
  explicit Corpus(std::vector<Article> articles) : articles_(std::move(articles)) {
    std::unordered_set<std::string> seen;
    seen.reserve(articles_.size());
    for (const auto& a : articles_) {
      if (!seen.insert(a.id).second) {
        throw DataError("duplicate article id '" + a.id + "'");
      }
      if (a.venue.empty()) throw DataError("article '" + a.id + "' has no venue");
      if (a.year <= 0) throw DataError("article '" + a.id + "' has a non-positive year");
      if (a.title_abstract.empty() && a.keywords.empty()) {
        throw DataError("article '" + a.id + "' has neither text nor keywords");
      }
      ++venue_counts_[a.venue];
    }
  }

  const std::vector<Article>& articles() const { return articles_; }
  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }

  /// venue id -> m_j, ordered by venue id.
  const std::map<std::string, std::size_t>& venue_counts() const { return venue_counts_; }
  std::size_t num_venues() const { return venue_counts_.size(); }
  bool has_venue(const std::string& venue) const { return venue_counts_.count(venue) > 0; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.articles_ == b.articles_; }

 private:
  std::vector<Article> articles_;
  std::map<std::string, std::size_t> venue_counts_;
};

/// Key names used in the line-delimited corpus file.
struct CorpusSchema {
  std::string id = "id";
  std::string venue = "venue";
  std::string year = "year";
  std::string title_abstract = "title_abstract";
  std::string keywords = "keywords";
  std::string authors = "authors";
};

struct LoadResult {
  Corpus corpus;
  std::size_t skipped = 0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> string_array(const nlohmann::json& j, const std::string& key,
                                             bool trim_items) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw std::invalid_argument("'" + key + "' is not an array");
  for (const auto& v : *it) {
    if (!v.is_string()) throw std::invalid_argument("'" + key + "' holds a non-string item");
    auto s = trim_items ? trim(v.get<std::string>()) : v.get<std::string>();
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Parses one corpus record. Throws std::invalid_argument describing the
/// first problem found.
inline Article parse_article(const std::string& line, const CorpusSchema& schema = {}) {
  auto j = nlohmann::json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  Article a;
  auto str_field = [&](const std::string& key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) throw std::invalid_argument("missing '" + key + "'");
      return {};
    }
    if (!it->is_string()) throw std::invalid_argument("'" + key + "' is not a string");
    return it->get<std::string>();
  };
  a.id = detail::trim(str_field(schema.id, true));
  a.venue = detail::trim(str_field(schema.venue, true));
  if (a.id.empty()) throw std::invalid_argument("empty '" + schema.id + "'");
  if (a.venue.empty()) throw std::invalid_argument("empty '" + schema.venue + "'");
  auto year = j.find(schema.year);
  if (year == j.end() || !year->is_number_integer()) {
    throw std::invalid_argument("missing or non-integer '" + schema.year + "'");
  }
  a.year = year->get<int>();
  if (a.year <= 0) throw std::invalid_argument("non-positive year");
  a.title_abstract = str_field(schema.title_abstract, false);
  a.keywords = detail::string_array(j, schema.keywords, false);
  a.authors = detail::string_array(j, schema.authors, true);
  if (detail::trim(a.title_abstract).empty() && a.keywords.empty()) {
    throw std::invalid_argument("no title/abstract and no keywords");
  }
  return a;
}

inline std::string article_to_json(const Article& a) {
  nlohmann::ordered_json j;
  j["id"] = a.id;
  j["venue"] = a.venue;
  j["year"] = a.year;
  j["title_abstract"] = a.title_abstract;
  j["keywords"] = a.keywords;
  j["authors"] = a.authors;
  return j.dump();
}

/// Reads a line-delimited corpus. Malformed records are skipped with a
/// warning; a duplicate id is fatal.
inline LoadResult load_corpus(std::istream& in, const CorpusSchema& schema = {},
                              const std::string& source = "<stream>") {
  std::vector<Article> articles;
  std::unordered_set<std::string> ids;
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    Article a;
    try {
      a = parse_article(line, schema);
    } catch (const std::exception& e) {
      log_warning(source + ":" + std::to_string(lineno) + ": skipped record: " + e.what());
      ++result.skipped;
      continue;
    }
    if (!ids.insert(a.id).second) {
      throw DataError(source + ":" + std::to_string(lineno) + ": duplicate article id '" +
                      a.id + "'");
    }
    articles.push_back(std::move(a));
  }
  result.corpus = Corpus(std::move(articles));
  return result;
}

inline LoadResult load_corpus(const std::filesystem::path& path, const CorpusSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus file " + path.string());
  return load_corpus(in, schema, path.string());
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& a : corpus.articles()) out << article_to_json(a) << '\n';
}

/// Drops the listed venues entirely.
inline Corpus exclude_venues(const Corpus& corpus, const std::set<std::string>& excluded) {
  if (excluded.empty()) return corpus;
  std::vector<Article> kept;
  for (const auto& a : corpus.articles()) {
    if (!excluded.count(a.venue)) kept.push_back(a);
  }
  if (kept.empty()) throw DataError("venue exclusion removed every article");
  return Corpus(std::move(kept));
}

/// Keeps the articles of venues with at least `min_articles` articles.
inline Corpus filter_venues(const Corpus& corpus, std::size_t min_articles) {
  if (min_articles < 1) throw UsageError("min_articles must be >= 1");
  std::vector<Article> kept;
  kept.reserve(corpus.size());
  const auto& counts = corpus.venue_counts();
  for (const auto& a : corpus.articles()) {
    if (counts.at(a.venue) >= min_articles) kept.push_back(a);
  }
  if (kept.empty()) {
    throw DataError("no venue has at least " + std::to_string(min_articles) +
                    " articles; lower --min-venue-articles");
  }
  return Corpus(std::move(kept));
}

struct SplitParams {
  /// Articles with year <= boundary_year are training data.
  int boundary_year = 2015;
};

struct Split {
  Corpus train;
  Corpus test;
  /// Ids of test articles whose venue never occurs in train. They stay in
  /// the test set and can only ever count as misses.
  std::vector<std::string> unseen_venue_ids;
};

inline Split split_by_year(const Corpus& corpus, SplitParams params) {
  if (corpus.empty()) throw DataError("cannot split an empty corpus");
  std::vector<Article> train, test;
  for (const auto& a : corpus.articles()) {
    (a.year <= params.boundary_year ? train : test).push_back(a);
  }
  if (train.empty()) {
    throw DataError("empty training split: no article published in or before " +
                    std::to_string(params.boundary_year));
  }
  if (test.empty()) {
    throw DataError("empty test split: no article published after " +
                    std::to_string(params.boundary_year));
  }
  Split s{Corpus(std::move(train)), Corpus(std::move(test)), {}};
  for (const auto& a : s.test.articles()) {
    if (!s.train.has_venue(a.venue)) s.unseen_venue_ids.push_back(a.id);
  }
  return s;
}

}  // namespace venuerec
