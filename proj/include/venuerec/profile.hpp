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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "venuerec/cluster.hpp"
#include "venuerec/corpus.hpp"
#include "venuerec/error.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec {

/// An article reduced to the three indexable field bags. Tokens are the
/// stopped and stemmed text; no vocabulary pruning applies here.
struct AnalyzedArticle {
  std::string id;
  std::string venue;
  TermBag content;
  TermBag keywords;
  TermBag authors;
};

inline AnalyzedArticle analyze(const Article& a, const StopwordSet& stopwords) {
  AnalyzedArticle out{a.id, a.venue, {}, {}, {}};
  out.content = make_bag(tokenize_and_stem(a.title_abstract, stopwords));
  out.keywords = make_bag(tokenize_keywords(a.keywords, stopwords));
  for (const auto& au : a.authors) {
    auto t = detail::trim(au);
    if (!t.empty()) ++out.authors[t];
  }
  return out;
}

inline std::vector<AnalyzedArticle> analyze(const Corpus& corpus, const StopwordSet& stopwords) {
  std::vector<AnalyzedArticle> out;
  out.reserve(corpus.size());
  for (const auto& a : corpus.articles()) out.push_back(analyze(a, stopwords));
  return out;
}

enum class ProfileStrategy { kSingle, kDistributed, kGroup };

inline ProfileStrategy parse_strategy(std::string_view s) {
  if (s == "sp") return ProfileStrategy::kSingle;
  if (s == "dp") return ProfileStrategy::kDistributed;
  if (s == "gp") return ProfileStrategy::kGroup;
  throw UsageError("unknown profile strategy '" + std::string(s) + "' (expected sp|dp|gp)");
}

inline std::string_view to_string(ProfileStrategy s) {
  switch (s) {
    case ProfileStrategy::kSingle: return "sp";
    case ProfileStrategy::kDistributed: return "dp";
    case ProfileStrategy::kGroup: return "gp";
  }
  return "?";
}

/// One indexable macro-document: the articles of one venue that fall in
/// one group, with their fields concatenated.
struct Subprofile {
  std::string doc_id;
  std::string venue;
  std::optional<std::uint32_t> cluster;
  TermBag content;
  TermBag keywords;
  TermBag authors;
  std::vector<std::string> members;  // sorted article ids

  std::size_t n_articles() const { return members.size(); }

  bool same_fields(const Subprofile& o) const {
    return venue == o.venue && content == o.content && keywords == o.keywords &&
           authors == o.authors && members == o.members;
  }
};

namespace detail {

inline void merge_bag(TermBag& into, const TermBag& from) {
  for (const auto& [t, n] : from) into[t] += n;
}

inline void add_member(Subprofile& p, const AnalyzedArticle& a) {
  merge_bag(p.content, a.content);
  merge_bag(p.keywords, a.keywords);
  merge_bag(p.authors, a.authors);
  p.members.push_back(a.id);
}

}  // namespace detail

/// Builds the subprofile documents for one strategy:
///   SP -> one per venue, DP -> one per article, GP -> one per non-empty
///   (venue, cluster) pair. Output is sorted by doc_id.
inline std::vector<Subprofile> build_profiles(std::span<const AnalyzedArticle> train,
                                              ProfileStrategy strategy,
                                              const ClusteringResult* clustering = nullptr) {
  std::unordered_map<std::string, std::uint32_t> cluster_of;
  if (strategy == ProfileStrategy::kGroup) {
    if (!clustering) throw UsageError("group profiles need a clustering result");
    cluster_of = clustering->assignment_map();
  }
  std::map<std::string, Subprofile> docs;
  for (const auto& a : train) {
    std::string key;
    std::optional<std::uint32_t> cluster;
    switch (strategy) {
      case ProfileStrategy::kSingle:
        key = a.venue;
        break;
      case ProfileStrategy::kDistributed:
        key = a.venue + "#" + a.id;
        break;
      case ProfileStrategy::kGroup: {
        auto it = cluster_of.find(a.id);
        if (it == cluster_of.end()) {
          throw DataError("article '" + a.id + "' has no cluster assignment");
        }
        if (it->second >= clustering->k) {
          throw DataError("article '" + a.id + "' references unknown cluster " +
                          std::to_string(it->second));
        }
        cluster = it->second;
        key = a.venue + "#" + std::to_string(it->second);
        break;
      }
    }
    auto [pos, fresh] = docs.try_emplace(key);
    if (fresh) {
      pos->second.doc_id = key;
      pos->second.venue = a.venue;
      pos->second.cluster = cluster;
    }
    detail::add_member(pos->second, a);
  }
  std::vector<Subprofile> out;
  out.reserve(docs.size());
  for (auto& [_, p] : docs) {
    std::sort(p.members.begin(), p.members.end());
    out.push_back(std::move(p));
  }
  return out;
}

inline std::string subprofile_to_json(const Subprofile& p) {
  nlohmann::ordered_json j;
  j["doc_id"] = p.doc_id;
  j["venue"] = p.venue;
  j["cluster"] = p.cluster ? nlohmann::ordered_json(*p.cluster) : nlohmann::ordered_json(nullptr);
  j["n_articles"] = p.n_articles();
  j["members"] = p.members;
  j["content"] = p.content;
  j["keywords"] = p.keywords;
  j["authors"] = p.authors;
  return j.dump();
}

inline Subprofile subprofile_from_json(const std::string& line) {
  auto j = nlohmann::json::parse(line);
  Subprofile p;
  p.doc_id = j.at("doc_id").get<std::string>();
  p.venue = j.at("venue").get<std::string>();
  if (!j.at("cluster").is_null()) p.cluster = j["cluster"].get<std::uint32_t>();
  p.members = j.at("members").get<std::vector<std::string>>();
  p.content = j.at("content").get<TermBag>();
  p.keywords = j.at("keywords").get<TermBag>();
  p.authors = j.at("authors").get<TermBag>();
  if (p.members.empty()) throw DataError("subprofile '" + p.doc_id + "' has no member articles");
  return p;
}

inline void write_profiles(std::ostream& out, std::span<const Subprofile> profiles) {
  for (const auto& p : profiles) out << subprofile_to_json(p) << '\n';
}

inline std::vector<Subprofile> read_profiles(std::istream& in) {
  std::vector<Subprofile> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(subprofile_from_json(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("profile line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace venuerec
