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
#include <string>
#include <unordered_map>
#include <vector>

#include "venuerec/error.hpp"
#include "venuerec/index.hpp"

namespace venuerec {

struct VenueScore {
  std::string venue;
  double score;
  friend bool operator==(const VenueScore&, const VenueScore&) = default;
};

/// Descending score, ties by ascending venue id, each venue once.
using VenueRanking = std::vector<VenueScore>;

inline void sort_ranking(VenueRanking& r) {
  std::sort(r.begin(), r.end(), [](const VenueScore& a, const VenueScore& b) {
    return a.score != b.score ? a.score > b.score : a.venue < b.venue;
  });
}

/// CombLgDCS: a venue scores its best document's raw score plus, for each
/// other retrieved document, score / log2(position + 1) where position is
/// the 1-based rank in the full document ranking.
inline VenueRanking comb_lgdcs(const RankedList& ranked, const DocVenueMap& doc_to_venue) {
  std::unordered_map<std::string, std::size_t> slot;
  VenueRanking out;
  for (const auto& d : ranked) {
    auto v = doc_to_venue.find(d.doc_id);
    if (v == doc_to_venue.end()) throw DataError("ranked doc '" + d.doc_id + "' has no venue");
    auto [it, first] = slot.try_emplace(v->second, out.size());
    if (first) {
      // Ranked lists are score-descending, so the first hit is the maximum.
      out.push_back({v->second, d.score});
    } else {
      out[it->second].score += d.score / std::log2(static_cast<double>(d.position) + 1.0);
    }
  }
  sort_ranking(out);
  return out;
}

/// Divides every score by the maximum; empty or all-zero input is returned
/// unchanged.
inline VenueRanking normalize_max(VenueRanking ranking) {
  double mx = 0.0;
  for (const auto& v : ranking) mx = std::max(mx, v.score);
  if (mx <= 0.0) return ranking;
  for (auto& v : ranking) v.score /= mx;
  return ranking;
}

struct FusionParams {
  double lambda_blend = 0.75;
};

/// One entry of a blended ranking with its two (normalized) inputs.
struct BlendedScore {
  std::string venue;
  double score;
  double content;
  double author;
};

namespace detail {

inline void check_normalized(const VenueRanking& r, const char* which) {
  for (const auto& v : r) {
    if (v.score > 1.0 + 1e-9 || v.score < 0.0) {
      throw UsageError(std::string(which) + " ranking is not max-normalized");
    }
  }
}

}  // namespace detail

/// lambda * content + (1 - lambda) * author over the union of venues; a
/// venue missing on one side takes 0 there. Venues whose blended score is
/// 0 carry no evidence and are left out.
inline std::vector<BlendedScore> comb_linear_detailed(const VenueRanking& content,
                                                      const VenueRanking& author,
                                                      FusionParams params) {
  const double lambda = params.lambda_blend;
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw UsageError("lambda_blend must lie in [0, 1]");
  detail::check_normalized(content, "content");
  detail::check_normalized(author, "author");
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<BlendedScore> out;
  for (const auto& v : content) {
    slot.emplace(v.venue, out.size());
    out.push_back({v.venue, 0.0, v.score, 0.0});
  }
  for (const auto& v : author) {
    auto [it, fresh] = slot.try_emplace(v.venue, out.size());
    if (fresh) out.push_back({v.venue, 0.0, 0.0, 0.0});
    out[it->second].author = v.score;
  }
  for (auto& b : out) b.score = lambda * b.content + (1.0 - lambda) * b.author;
  std::erase_if(out, [](const BlendedScore& b) { return b.score <= 0.0; });
  std::sort(out.begin(), out.end(), [](const BlendedScore& a, const BlendedScore& b) {
    return a.score != b.score ? a.score > b.score : a.venue < b.venue;
  });
  return out;
}

inline VenueRanking comb_linear(const VenueRanking& content, const VenueRanking& author,
                                FusionParams params) {
  VenueRanking out;
  for (auto& b : comb_linear_detailed(content, author, params)) out.push_back({b.venue, b.score});
  return out;
}

}  // namespace venuerec
