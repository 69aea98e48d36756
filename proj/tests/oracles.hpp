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

// Independent reference implementations shared by the unit tests and the
// acceptance runner. They favor the direct definition over speed and use
// none of the library's scoring or fusion code.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "venuerec/fusion.hpp"
#include "venuerec/index.hpp"
#include "venuerec/profile.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec::oracle {

// ---- clustering ----------------------------------------------------------

/// Dense rows to sparse DocVectors (explicit zeros dropped).
inline std::vector<DocVector> to_points(const std::vector<std::vector<double>>& rows) {
  std::vector<DocVector> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    DocVector v{"p" + std::to_string(i), {}};
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] != 0.0) v.entries.emplace_back(static_cast<std::uint32_t>(j), rows[i][j]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline double direct_sq_dist(const std::vector<double>& x, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
  return s;
}

inline double n_choose_2(double n) { return n * (n - 1) / 2.0; }

/// Adjusted Rand index from the contingency table definition.
inline double adjusted_rand(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> nij;
  std::map<int, double> ai, bj;
  for (std::size_t i = 0; i < a.size(); ++i) {
    nij[{a[i], b[i]}] += 1;
    ai[a[i]] += 1;
    bj[b[i]] += 1;
  }
  double index = 0, sa = 0, sb = 0;
  for (auto& [_, n] : nij) index += n_choose_2(n);
  for (auto& [_, n] : ai) sa += n_choose_2(n);
  for (auto& [_, n] : bj) sb += n_choose_2(n);
  const double expected = sa * sb / n_choose_2(static_cast<double>(a.size()));
  const double max_index = (sa + sb) / 2.0;
  return (index - expected) / (max_index - expected);
}

struct Planted {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

/// Reads `label<TAB>x0<TAB>x1...` rows; '#' lines are comments.
inline Planted load_planted(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Planted p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    int label;
    is >> label;
    std::vector<double> row;
    double x;
    while (is >> x) row.push_back(x);
    p.labels.push_back(label);
    p.rows.push_back(row);
  }
  return p;
}

// ---- retrieval -----------------------------------------------------------

inline const TermBag& bag_of(const Subprofile& p, Field f) {
  switch (f) {
    case Field::kContent: return p.content;
    case Field::kKeywords: return p.keywords;
    case Field::kAuthors: return p.authors;
  }
  return p.content;
}

/// Exhaustive JM scoring of every profile, straight from the bags.
inline RankedList jm_search(const std::vector<Subprofile>& profiles, const Query& q,
                            const FieldWeights& w, std::size_t top_n, double lambda) {
  std::vector<const Subprofile*> docs;
  for (const auto& p : profiles) docs.push_back(&p);
  std::sort(docs.begin(), docs.end(), [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
  // Collection statistics per field: total length and per-term frequency.
  std::array<double, kNumFields> coll{};
  std::array<std::map<std::string, double>, kNumFields> cfs;
  for (auto f : kAllFields) {
    const auto fi = static_cast<std::size_t>(f);
    for (const auto* o : docs) {
      for (const auto& [t, n] : bag_of(*o, f)) {
        coll[fi] += static_cast<double>(n);
        cfs[fi][t] += static_cast<double>(n);
      }
    }
  }
  std::vector<std::pair<double, std::string>> scored;
  for (const auto* d : docs) {
    double s = 0.0;
    for (auto f : kAllFields) {
      if (w[f] == 0.0) continue;
      const auto fi = static_cast<std::size_t>(f);
      double dl = 0.0;
      for (const auto& [t, n] : bag_of(*d, f)) dl += static_cast<double>(n);
      for (const auto& [t, qtf] : q[f]) {
        auto it = bag_of(*d, f).find(t);
        if (it == bag_of(*d, f).end() || it->second == 0) continue;
        const double tf = static_cast<double>(it->second);
        s += w[f] * static_cast<double>(qtf) *
             std::log(1.0 + ((1.0 - lambda) * tf / dl) / (lambda * cfs[fi][t] / coll[fi]));
      }
    }
    if (s > 0.0) scored.emplace_back(s, d->doc_id);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  RankedList out;
  for (std::size_t i = 0; i < scored.size() && i < top_n; ++i) {
    out.push_back({0, scored[i].second, scored[i].first, i + 1});
  }
  return out;
}

inline Subprofile make_profile(std::string id, std::string venue, TermBag content,
                               TermBag kw = {}, TermBag authors = {}) {
  Subprofile p;
  p.doc_id = std::move(id);
  p.venue = std::move(venue);
  p.content = std::move(content);
  p.keywords = std::move(kw);
  p.authors = std::move(authors);
  p.members = {p.doc_id};
  return p;
}

inline std::vector<Subprofile> random_profiles(std::mt19937& rng, std::size_t n,
                                               std::size_t vocab) {
  std::vector<Subprofile> out;
  for (std::size_t i = 0; i < n; ++i) {
    TermBag c, k, a;
    const std::size_t len = rng() % 12;
    for (std::size_t j = 0; j < len; ++j) ++c["t" + std::to_string(rng() % vocab)];
    const std::size_t nk = rng() % 3, na = rng() % 3;
    for (std::size_t j = 0; j < nk; ++j) ++k["k" + std::to_string(rng() % 10)];
    for (std::size_t j = 0; j < na; ++j) ++a["o" + std::to_string(rng() % 15)];
    out.push_back(make_profile("d" + std::to_string(i), "v" + std::to_string(rng() % 20), c, k, a));
  }
  return out;
}

inline Query random_query(std::mt19937& rng, std::size_t vocab) {
  Query q;
  for (int j = 0; j < 6; ++j) ++q[Field::kContent]["t" + std::to_string(rng() % (vocab + 3))];
  ++q[Field::kKeywords]["k" + std::to_string(rng() % 12)];
  ++q[Field::kAuthors]["o" + std::to_string(rng() % 15)];
  return q;
}

// ---- fusion --------------------------------------------------------------

/// Groups by venue, takes each venue's maximum doc (earliest on ties) at
/// full score and devalues the rest by log2(position + 1).
inline VenueRanking lgdcs(const RankedList& ranked, const DocVenueMap& dv) {
  std::map<std::string, std::vector<const RankedDoc*>> groups;
  for (const auto& d : ranked) groups[dv.at(d.doc_id)].push_back(&d);
  VenueRanking out;
  for (const auto& [venue, docs] : groups) {
    const RankedDoc* best = docs.front();
    for (const auto* d : docs) {
      if (d->score > best->score || (d->score == best->score && d->position < best->position)) {
        best = d;
      }
    }
    double s = best->score;
    for (const auto* d : docs) {
      if (d != best) s += d->score / std::log2(static_cast<double>(d->position) + 1.0);
    }
    out.push_back({venue, s});
  }
  std::sort(out.begin(), out.end(), [](const VenueScore& a, const VenueScore& b) {
    return a.score != b.score ? a.score > b.score : a.venue < b.venue;
  });
  return out;
}

/// Doc ids look like "<venue>#<n>".
inline DocVenueMap venue_map(const RankedList& r) {
  DocVenueMap m;
  for (const auto& d : r) m[d.doc_id] = d.doc_id.substr(0, d.doc_id.find('#'));
  return m;
}

/// A score-descending ranked list with occasional exact score ties.
inline RankedList random_ranked(std::mt19937& rng, std::size_t n_docs, std::size_t n_venues) {
  std::vector<std::pair<std::string, double>> docs;
  std::uniform_real_distribution<double> score(0.01, 20.0);
  for (std::size_t i = 0; i < n_docs; ++i) {
    const double s = (rng() % 10 == 0 && !docs.empty()) ? docs.back().second : score(rng);
    docs.emplace_back("v" + std::to_string(rng() % n_venues) + "#" + std::to_string(i), s);
  }
  std::stable_sort(docs.begin(), docs.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  RankedList out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.push_back({static_cast<std::uint32_t>(i), docs[i].first, docs[i].second, i + 1});
  }
  return out;
}

// ---- metrics -------------------------------------------------------------

inline double accuracy(const std::vector<std::optional<std::size_t>>& ranks, std::size_t x) {
  double hits = 0;
  for (const auto& r : ranks) hits += (r && *r <= x) ? 1 : 0;
  return hits / static_cast<double>(ranks.size());
}

inline double mrr(const std::vector<std::optional<std::size_t>>& ranks, std::size_t cutoff) {
  double s = 0;
  for (const auto& r : ranks) s += (r && *r <= cutoff) ? 1.0 / static_cast<double>(*r) : 0.0;
  return s / static_cast<double>(ranks.size());
}

}  // namespace venuerec::oracle
