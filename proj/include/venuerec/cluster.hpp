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
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "venuerec/error.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec {

enum class KMethod { kCan, kKaufman, kFixed };

inline KMethod parse_k_method(std::string_view s) {
  if (s == "can") return KMethod::kCan;
  if (s == "kaufman") return KMethod::kKaufman;
  if (s == "fixed") return KMethod::kFixed;
  throw UsageError("unknown K method '" + std::string(s) + "' (expected can|kaufman|fixed)");
}

inline std::string_view to_string(KMethod k) {
  switch (k) {
    case KMethod::kCan: return "can";
    case KMethod::kKaufman: return "kaufman";
    case KMethod::kFixed: return "fixed";
  }
  return "?";
}

/// Number of clusters from the classical rules of thumb:
///   can     -> floor(sqrt(m / 2))
///   kaufman -> ceil(m * t / e)   (m articles, t terms, e matrix nonzeros)
///   fixed   -> fixed_value
inline std::size_t heuristic_k(KMethod method, std::uint64_t m, std::uint64_t t, std::uint64_t e,
                               std::optional<std::size_t> fixed_value = std::nullopt) {
  switch (method) {
    case KMethod::kCan: {
      if (m == 0) throw UsageError("heuristic K needs m > 0");
      auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m) / 2.0)));
      return std::max<std::size_t>(k, 1);
    }
    case KMethod::kKaufman: {
      if (m == 0 || t == 0 || e == 0) throw UsageError("heuristic K needs m, t, e > 0");
      // Exact integer ceiling of m*t/e.
      unsigned __int128 num = static_cast<unsigned __int128>(m) * t;
      auto k = static_cast<std::size_t>((num + e - 1) / e);
      return std::max<std::size_t>(k, 1);
    }
    case KMethod::kFixed:
      if (!fixed_value || *fixed_value < 1) throw UsageError("fixed K method needs a value >= 1");
      return *fixed_value;
  }
  throw UsageError("bad K method");
}

struct KMeansParams {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol = 1e-4;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct ClusteringResult {
  std::vector<std::string> article_ids;
  std::vector<std::uint32_t> assignment;  // parallel to article_ids
  std::size_t k = 0;
  std::size_t dim = 0;
  /// Row-major k x dim; empty when loaded from disk.
  std::vector<double> centroids;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  /// Inertia after every assignment step, the last one being `inertia`.
  std::vector<double> inertia_history;

  std::span<const double> centroid(std::size_t c) const {
    return std::span<const double>(centroids).subspan(c * dim, dim);
  }

  std::unordered_map<std::string, std::uint32_t> assignment_map() const {
    std::unordered_map<std::string, std::uint32_t> m;
    m.reserve(article_ids.size());
    for (std::size_t i = 0; i < article_ids.size(); ++i) m.emplace(article_ids[i], assignment[i]);
    return m;
  }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> s(k, 0);
    for (auto a : assignment) ++s[a];
    return s;
  }

  void save(std::ostream& out) const {
    std::ostringstream inert;
    inert << std::setprecision(17) << inertia;
    out << "#clustering\tK=" << k << "\tseed=" << seed << "\tt=" << dim
        << "\tinertia=" << inert.str() << '\n';
    for (std::size_t i = 0; i < article_ids.size(); ++i) {
      out << article_ids[i] << '\t' << assignment[i] << '\n';
    }
  }

  static ClusteringResult load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("#clustering\t", 0) != 0) {
      throw DataError("not a clustering file");
    }
    ClusteringResult r;
    std::istringstream hs(header.substr(12));
    std::string kv;
    while (std::getline(hs, kv, '\t')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      auto key = kv.substr(0, eq);
      auto val = kv.substr(eq + 1);
      if (key == "K") r.k = std::stoull(val);
      else if (key == "seed") r.seed = std::stoull(val);
      else if (key == "t") r.dim = std::stoull(val);
      else if (key == "inertia") r.inertia = std::stod(val);
    }
    if (r.k == 0) throw DataError("clustering header lacks K");
    std::string line;
    while (std::getline(in, line)) {
      auto tab = line.rfind('\t');
      if (tab == std::string::npos) throw DataError("malformed clustering line: " + line);
      auto c = std::stoul(line.substr(tab + 1));
      if (c >= r.k) throw DataError("cluster id out of range in line: " + line);
      r.article_ids.push_back(line.substr(0, tab));
      r.assignment.push_back(static_cast<std::uint32_t>(c));
    }
    return r;
  }
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double dot(const DocVector& x, std::span<const double> c) {
  double s = 0.0;
  for (const auto& [id, w] : x.entries) s += w * c[id];
  return s;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding on sparse points and dense
/// centroids. Squared distances use |x|^2 + |c|^2 - 2<x,c>.
class KMeans {
 public:
  KMeans(std::span<const DocVector> points, std::size_t dim, KMeansParams params)
      : points_(points), dim_(dim), p_(params) {
    if (points_.empty()) throw UsageError("k-means needs at least one point");
    if (p_.k < 1) throw UsageError("k-means needs K >= 1");
    if (p_.max_iter < 1) throw UsageError("k-means needs max_iter >= 1");
    std::size_t nonzero = 0;
    for (const auto& x : points_) {
      if (!x.is_zero()) ++nonzero;
      for (const auto& [id, _] : x.entries) {
        if (id >= dim_) throw UsageError("point term id exceeds dimension");
      }
    }
    if (p_.k > nonzero) {
      throw UsageError("K=" + std::to_string(p_.k) + " exceeds the " + std::to_string(nonzero) +
                       " usable (nonzero) vectors");
    }
    sq_norms_.reserve(points_.size());
    for (const auto& x : points_) sq_norms_.push_back(x.squared_norm());
  }

  ClusteringResult run() {
    rng_.seed(p_.seed);
    init_plus_plus();
    const std::size_t n = points_.size();
    assignment_.assign(n, 0);
    dist_.assign(n, 0.0);

    ClusteringResult r;
    r.k = p_.k;
    r.dim = dim_;
    r.seed = p_.seed;
    for (int it = 0; it < p_.max_iter; ++it) {
      r.inertia_history.push_back(assign());
      ++r.iterations;
      const double shift = update();
      if (shift <= p_.tol) break;
    }
    r.inertia = assign();
    r.inertia_history.push_back(r.inertia);
    r.assignment = assignment_;
    r.centroids = centroids_;
    r.article_ids.reserve(n);
    for (const auto& x : points_) r.article_ids.push_back(x.article_id);
    return r;
  }

 private:
  double sq_dist(std::size_t i, std::span<const double> c, double c_sq) const {
    return std::max(0.0, sq_norms_[i] + c_sq - 2.0 * detail::dot(points_[i], c));
  }

  std::span<double> centroid(std::size_t c) {
    return std::span<double>(centroids_).subspan(c * dim_, dim_);
  }

  void set_centroid_to_point(std::size_t c, std::size_t i) {
    auto row = centroid(c);
    std::fill(row.begin(), row.end(), 0.0);
    for (const auto& [id, w] : points_[i].entries) row[id] = w;
    centroid_sq_[c] = sq_norms_[i];
  }

  void init_plus_plus() {
    const std::size_t n = points_.size();
    centroids_.assign(p_.k * dim_, 0.0);
    centroid_sq_.assign(p_.k, 0.0);
    std::vector<char> chosen(n, 0);
    std::size_t first = static_cast<std::size_t>(detail::uniform01(rng_) * static_cast<double>(n));
    first = std::min(first, n - 1);
    set_centroid_to_point(0, first);
    chosen[first] = 1;
    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) closest[i] = sq_dist(i, centroid(0), centroid_sq_[0]);
    for (std::size_t c = 1; c < p_.k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : closest[i];
      std::size_t pick = n;
      if (total > 0.0) {
        double target = detail::uniform01(rng_) * total;
        for (std::size_t i = 0; i < n; ++i) {
          if (chosen[i] || closest[i] <= 0.0) continue;
          pick = i;
          target -= closest[i];
          if (target < 0.0) break;
        }
      }
      if (pick == n) {
        // Every remaining point coincides with a center: take one uniformly.
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i]) rest.push_back(i);
        }
        pick = rest[std::min(rest.size() - 1, static_cast<std::size_t>(detail::uniform01(rng_) *
                                                                        static_cast<double>(rest.size())))];
      }
      set_centroid_to_point(c, pick);
      chosen[pick] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        closest[i] = std::min(closest[i], sq_dist(i, centroid(c), centroid_sq_[c]));
      }
    }
  }

  // Nearest centroid per point, ties to the lowest id. Returns inertia.
  double assign() {
    detail::parallel_for(points_.size(), p_.threads, [this](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t arg = 0;
        for (std::size_t c = 0; c < p_.k; ++c) {
          const double d = sq_dist(i, centroid(c), centroid_sq_[c]);
          if (d < best) {
            best = d;
            arg = static_cast<std::uint32_t>(c);
          }
        }
        assignment_[i] = arg;
        dist_[i] = best;
      }
    });
    double inertia = 0.0;
    for (double d : dist_) inertia += d;
    return inertia;
  }

  // Recomputes means; returns the Frobenius norm of the centroid shift.
  double update() {
    const std::size_t n = points_.size();
    std::vector<std::size_t> counts(p_.k, 0);
    for (auto a : assignment_) ++counts[a];

    // Empty clusters take the farthest point from a cluster that can spare it.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t a, std::size_t b) { return dist_[a] > dist_[b]; });
    std::size_t next = 0;
    for (std::size_t c = 0; c < p_.k; ++c) {
      if (counts[c] != 0) continue;
      while (next < n && counts[assignment_[order[next]]] <= 1) ++next;
      if (next == n) break;
      const std::size_t i = order[next++];
      --counts[assignment_[i]];
      assignment_[i] = static_cast<std::uint32_t>(c);
      counts[c] = 1;
      dist_[i] = 0.0;
    }

    std::vector<double> sums(p_.k * dim_, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* row = sums.data() + assignment_[i] * dim_;
      for (const auto& [id, w] : points_[i].entries) row[id] += w;
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < p_.k; ++c) {
      auto row = centroid(c);
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      double sq = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double v = sums[c * dim_ + j] * inv;
        const double d = v - row[j];
        shift += d * d;
        row[j] = v;
        sq += v * v;
      }
      centroid_sq_[c] = sq;
    }
    return std::sqrt(shift);
  }

  std::span<const DocVector> points_;
  std::size_t dim_;
  KMeansParams p_;
  std::mt19937_64 rng_;
  std::vector<double> sq_norms_;
  std::vector<double> centroids_;
  std::vector<double> centroid_sq_;
  std::vector<std::uint32_t> assignment_;
  std::vector<double> dist_;
};

inline ClusteringResult kmeans(std::span<const DocVector> points, std::size_t dim,
                               KMeansParams params) {
  return KMeans(points, dim, params).run();
}

}  // namespace venuerec
