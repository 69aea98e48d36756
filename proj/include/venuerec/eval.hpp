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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "venuerec/error.hpp"
#include "venuerec/fusion.hpp"

namespace venuerec {

using Rank = std::optional<std::size_t>;

/// 1-based position of `truth` in the ranking, if present.
inline Rank rank_of_truth(const VenueRanking& ranking, const std::string& truth) {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i].venue == truth) return i + 1;
  }
  return std::nullopt;
}

/// Fraction of queries whose truth is ranked within the first x venues.
inline double accuracy_at(std::span<const Rank> ranks, std::size_t x) {
  if (x < 1) throw UsageError("accuracy@X needs X >= 1");
  if (ranks.empty()) throw UsageError("accuracy@X over zero queries");
  std::size_t hits = 0;
  for (const auto& r : ranks) {
    if (r && *r <= x) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

/// Mean reciprocal rank; ranks beyond `cutoff` and misses contribute 0.
inline double mrr(std::span<const Rank> ranks, std::size_t cutoff = 40) {
  if (cutoff < 1) throw UsageError("MRR cutoff must be >= 1");
  if (ranks.empty()) throw UsageError("MRR over zero queries");
  double sum = 0.0;
  for (const auto& r : ranks) {
    if (r && *r <= cutoff) sum += 1.0 / static_cast<double>(*r);
  }
  return sum / static_cast<double>(ranks.size());
}

inline constexpr std::array<std::size_t, 3> kAccuracyCutoffs{1, 5, 10};

struct Metrics {
  double acc1 = 0.0;
  double acc5 = 0.0;
  double acc10 = 0.0;
  double mrr = 0.0;
  std::size_t n_queries = 0;
};

inline Metrics compute_metrics(std::span<const Rank> ranks, std::size_t mrr_cutoff = 40) {
  Metrics m;
  m.acc1 = accuracy_at(ranks, 1);
  m.acc5 = accuracy_at(ranks, 5);
  m.acc10 = accuracy_at(ranks, 10);
  m.mrr = mrr(ranks, mrr_cutoff);
  m.n_queries = ranks.size();
  return m;
}

}  // namespace venuerec
