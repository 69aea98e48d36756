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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "venuerec/error.hpp"
#include "venuerec/profile.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec {

enum class Field : std::size_t { kContent = 0, kKeywords = 1, kAuthors = 2 };
inline constexpr std::size_t kNumFields = 3;
inline constexpr std::array<Field, kNumFields> kAllFields{Field::kContent, Field::kKeywords,
                                                          Field::kAuthors};

inline std::string_view to_string(Field f) {
  switch (f) {
    case Field::kContent: return "content";
    case Field::kKeywords: return "keywords";
    case Field::kAuthors: return "authors";
  }
  return "?";
}

inline Field parse_field(std::string_view s) {
  for (auto f : kAllFields) {
    if (to_string(f) == s) return f;
  }
  throw UsageError("unknown field '" + std::string(s) + "'");
}

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;
  friend bool operator==(const Posting&, const Posting&) = default;
};

struct TermEntry {
  std::uint64_t cf = 0;
  std::vector<Posting> postings;  // ascending doc
};

struct FieldData {
  std::unordered_map<std::string, TermEntry> terms;
  std::vector<std::uint64_t> doc_len;
  std::uint64_t collection_len = 0;
};

/// Per-field query material of one target article.
struct Query {
  std::array<TermBag, kNumFields> fields;

  TermBag& operator[](Field f) { return fields[static_cast<std::size_t>(f)]; }
  const TermBag& operator[](Field f) const { return fields[static_cast<std::size_t>(f)]; }
  bool empty() const {
    return std::all_of(fields.begin(), fields.end(), [](const TermBag& b) { return b.empty(); });
  }

  static Query from(const AnalyzedArticle& a) {
    Query q;
    q[Field::kContent] = a.content;
    q[Field::kKeywords] = a.keywords;
    q[Field::kAuthors] = a.authors;
    return q;
  }
};

struct FieldWeights {
  std::array<double, kNumFields> w{1.0, 1.0, 1.0};

  double operator[](Field f) const { return w[static_cast<std::size_t>(f)]; }
  static FieldWeights content_only() { return {{1.0, 1.0, 0.0}}; }
  static FieldWeights authors_only() { return {{0.0, 0.0, 1.0}}; }
};

struct RankedDoc {
  std::uint32_t doc;  // index into FieldedIndex::docs()
  std::string doc_id;
  double score;
  std::size_t position;  // 1-based
};

/// Descending by score, ties by ascending doc_id; only positive scores.
using RankedList = std::vector<RankedDoc>;

using DocVenueMap = std::unordered_map<std::string, std::string>;

/// Jelinek-Mercer term weight in its matching-term form:
/// ln(1 + ((1 - lambda) * tf / |d|) / (lambda * cf / |C|)).
inline double jm_term_weight(double tf, double doc_len, double cf, double collection_len,
                             double lambda) {
  return std::log(1.0 + ((1.0 - lambda) * tf / doc_len) / (lambda * cf / collection_len));
}

inline void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw UsageError("JM lambda must lie in (0, 1)");
}

class FieldedIndex {
 public:
  struct DocEntry {
    std::string doc_id;
    std::string venue;
  };

  FieldedIndex() = default;

  /// Throws DataError on duplicate doc ids or an empty profile set.
  static FieldedIndex build(std::span<const Subprofile> profiles) {
    if (profiles.empty()) throw DataError("cannot index an empty profile set");
    std::vector<const Subprofile*> sorted;
    sorted.reserve(profiles.size());
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const Subprofile* a, const Subprofile* b) { return a->doc_id < b->doc_id; });
    FieldedIndex idx;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i > 0 && sorted[i]->doc_id == sorted[i - 1]->doc_id) {
        throw DataError("duplicate doc id '" + sorted[i]->doc_id + "'");
      }
      idx.docs_.push_back({sorted[i]->doc_id, sorted[i]->venue});
    }
    for (auto f : kAllFields) {
      auto& fd = idx.fields_[static_cast<std::size_t>(f)];
      fd.doc_len.assign(sorted.size(), 0);
      for (std::size_t d = 0; d < sorted.size(); ++d) {
        const TermBag& bag = field_bag(*sorted[d], f);
        for (const auto& [term, tf] : bag) {
          if (tf == 0) continue;
          auto& te = fd.terms[term];
          te.cf += tf;
          te.postings.push_back({static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(tf)});
          fd.doc_len[d] += tf;
        }
        fd.collection_len += fd.doc_len[d];
      }
    }
    idx.finish();
    return idx;
  }

  std::size_t num_docs() const { return docs_.size(); }
  const std::vector<DocEntry>& docs() const { return docs_; }
  const FieldData& field(Field f) const { return fields_[static_cast<std::size_t>(f)]; }
  const DocVenueMap& doc_venues() const { return doc_venue_; }

  std::optional<std::uint32_t> doc_index(const std::string& doc_id) const {
    auto it = doc_pos_.find(doc_id);
    if (it == doc_pos_.end()) return std::nullopt;
    return it->second;
  }

  std::uint64_t tf(const std::string& term, std::uint32_t doc, Field f) const {
    const auto& fd = field(f);
    auto it = fd.terms.find(term);
    if (it == fd.terms.end()) return 0;
    const auto& ps = it->second.postings;
    auto p = std::lower_bound(ps.begin(), ps.end(), doc,
                              [](const Posting& x, std::uint32_t d) { return x.doc < d; });
    return (p != ps.end() && p->doc == doc) ? p->tf : 0;
  }

  std::uint64_t cf(const std::string& term, Field f) const {
    const auto& fd = field(f);
    auto it = fd.terms.find(term);
    return it == fd.terms.end() ? 0 : it->second.cf;
  }

  /// JM score of one field of one document against a bag of query terms.
  double score_lm_jm(const TermBag& query, const std::string& doc_id, Field f,
                     double lambda) const {
    check_lambda(lambda);
    auto d = doc_index(doc_id);
    if (!d) throw UsageError("unknown doc id '" + doc_id + "'");
    const auto& fd = field(f);
    const double dl = static_cast<double>(fd.doc_len[*d]);
    double s = 0.0;
    for (const auto& [term, qtf] : query) {
      const auto t = tf(term, *d, f);
      if (t == 0) continue;
      s += static_cast<double>(qtf) *
           jm_term_weight(static_cast<double>(t), dl, static_cast<double>(cf(term, f)),
                          static_cast<double>(fd.collection_len), lambda);
    }
    return s;
  }

  double score_lm_jm(const TermBag& query, const std::string& doc_id, std::string_view field,
                     double lambda) const {
    return score_lm_jm(query, doc_id, parse_field(field), lambda);
  }

  /// Weighted sum of per-field JM scores, top_n best documents.
  RankedList search(const Query& query, const FieldWeights& weights, std::size_t top_n,
                    double lambda) const {
    if (top_n < 1) throw UsageError("top_n must be >= 1");
    check_lambda(lambda);
    std::vector<double> acc(docs_.size(), 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> seen(docs_.size(), 0);
    for (auto f : kAllFields) {
      const double fw = weights[f];
      if (fw == 0.0) continue;
      const auto& fd = field(f);
      const double clen = static_cast<double>(fd.collection_len);
      for (const auto& [term, qtf] : query[f]) {
        auto it = fd.terms.find(term);
        if (it == fd.terms.end()) continue;
        const double cf = static_cast<double>(it->second.cf);
        for (const auto& p : it->second.postings) {
          acc[p.doc] += fw * static_cast<double>(qtf) *
                        jm_term_weight(p.tf, static_cast<double>(fd.doc_len[p.doc]), cf, clen,
                                       lambda);
          if (!seen[p.doc]) {
            seen[p.doc] = 1;
            touched.push_back(p.doc);
          }
        }
      }
    }
    std::vector<std::uint32_t> hits;
    hits.reserve(touched.size());
    for (auto d : touched) {
      if (acc[d] > 0.0) hits.push_back(d);
    }
    auto better = [&acc](std::uint32_t a, std::uint32_t b) {
      return acc[a] != acc[b] ? acc[a] > acc[b] : a < b;
    };
    const std::size_t n = std::min(top_n, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(),
                      better);
    RankedList out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({hits[i], docs_[hits[i]].doc_id, acc[hits[i]], i + 1});
    }
    return out;
  }

  void save(std::ostream& out) const;
  static FieldedIndex load(std::istream& in);

  void save_dir(const std::filesystem::path& dir) const;
  static FieldedIndex load_dir(const std::filesystem::path& dir);

  /// Human-readable collection statistics.
  std::string stats() const {
    std::ostringstream os;
    os << "docs\t" << docs_.size() << '\n';
    std::unordered_map<std::string, std::size_t> venues;
    for (const auto& d : docs_) ++venues[d.venue];
    os << "venues\t" << venues.size() << '\n';
    for (auto f : kAllFields) {
      const auto& fd = field(f);
      std::size_t postings = 0;
      for (const auto& [_, te] : fd.terms) postings += te.postings.size();
      os << to_string(f) << ".terms\t" << fd.terms.size() << '\n'
         << to_string(f) << ".postings\t" << postings << '\n'
         << to_string(f) << ".collection_length\t" << fd.collection_len << '\n'
         << to_string(f) << ".avg_doc_length\t"
         << (docs_.empty() ? 0.0
                           : static_cast<double>(fd.collection_len) /
                                 static_cast<double>(docs_.size()))
         << '\n';
    }
    return os.str();
  }

  static constexpr char kMagic[8] = {'V', 'R', 'E', 'C', 'I', 'D', 'X', '\0'};
  static constexpr std::uint32_t kVersion = 1;

 private:
  static const TermBag& field_bag(const Subprofile& p, Field f) {
    switch (f) {
      case Field::kContent: return p.content;
      case Field::kKeywords: return p.keywords;
      case Field::kAuthors: return p.authors;
    }
    return p.content;
  }

  void finish() {
    doc_pos_.clear();
    doc_venue_.clear();
    for (std::size_t i = 0; i < docs_.size(); ++i) {
      doc_pos_.emplace(docs_[i].doc_id, static_cast<std::uint32_t>(i));
      doc_venue_.emplace(docs_[i].doc_id, docs_[i].venue);
    }
  }

  std::vector<DocEntry> docs_;
  std::array<FieldData, kNumFields> fields_;
  std::unordered_map<std::string, std::uint32_t> doc_pos_;
  DocVenueMap doc_venue_;
};

namespace detail {

// Little-endian fixed-width encoding.
template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::is_unsigned_v<T>);
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw DataError("truncated index file");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

inline void put_str(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_str(std::istream& in) {
  auto n = get<std::uint32_t>(in);
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw DataError("truncated index file");
  return s;
}

}  // namespace detail

inline void FieldedIndex::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  detail::put<std::uint32_t>(out, kVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(docs_.size()));
  for (const auto& d : docs_) {
    detail::put_str(out, d.doc_id);
    detail::put_str(out, d.venue);
  }
  for (const auto& fd : fields_) {
    detail::put<std::uint64_t>(out, fd.collection_len);
    for (auto len : fd.doc_len) detail::put<std::uint64_t>(out, len);
    std::vector<const std::pair<const std::string, TermEntry>*> terms;
    terms.reserve(fd.terms.size());
    for (const auto& kv : fd.terms) terms.push_back(&kv);
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return a->first < b->first; });
    detail::put<std::uint64_t>(out, terms.size());
    for (const auto* kv : terms) {
      detail::put_str(out, kv->first);
      detail::put<std::uint64_t>(out, kv->second.cf);
      detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(kv->second.postings.size()));
      for (const auto& p : kv->second.postings) {
        detail::put<std::uint32_t>(out, p.doc);
        detail::put<std::uint32_t>(out, p.tf);
      }
    }
  }
}

inline FieldedIndex FieldedIndex::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not an index file (bad magic)");
  }
  if (auto v = detail::get<std::uint32_t>(in); v != kVersion) {
    throw DataError("unsupported index version " + std::to_string(v));
  }
  FieldedIndex idx;
  const auto ndocs = detail::get<std::uint32_t>(in);
  idx.docs_.reserve(ndocs);
  for (std::uint32_t i = 0; i < ndocs; ++i) {
    auto id = detail::get_str(in);
    auto venue = detail::get_str(in);
    idx.docs_.push_back({std::move(id), std::move(venue)});
  }
  for (auto& fd : idx.fields_) {
    fd.collection_len = detail::get<std::uint64_t>(in);
    fd.doc_len.resize(ndocs);
    for (auto& len : fd.doc_len) len = detail::get<std::uint64_t>(in);
    const auto nterms = detail::get<std::uint64_t>(in);
    fd.terms.reserve(nterms);
    for (std::uint64_t t = 0; t < nterms; ++t) {
      auto term = detail::get_str(in);
      TermEntry te;
      te.cf = detail::get<std::uint64_t>(in);
      te.postings.resize(detail::get<std::uint32_t>(in));
      for (auto& p : te.postings) {
        p.doc = detail::get<std::uint32_t>(in);
        p.tf = detail::get<std::uint32_t>(in);
        if (p.doc >= ndocs) throw DataError("posting references unknown document");
      }
      fd.terms.emplace(std::move(term), std::move(te));
    }
  }
  idx.finish();
  return idx;
}

inline void FieldedIndex::save_dir(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "index.bin", std::ios::binary);
  if (!out) throw DataError("cannot write index in " + dir.string());
  save(out);
  if (!out) throw DataError("failed writing index in " + dir.string());
}

inline FieldedIndex FieldedIndex::load_dir(const std::filesystem::path& dir) {
  std::ifstream in(dir / "index.bin", std::ios::binary);
  if (!in) throw DataError("missing index: " + (dir / "index.bin").string());
  return load(in);
}

}  // namespace venuerec
