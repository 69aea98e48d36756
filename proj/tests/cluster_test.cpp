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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "venuerec/cluster.hpp"

namespace venuerec {
namespace {

using oracle::adjusted_rand;
using oracle::direct_sq_dist;
using oracle::to_points;

oracle::Planted load_planted() {
  return oracle::load_planted(std::string(VENUEREC_TEST_DATA) + "/planted_40.tsv");
}

void check_invariants(const std::vector<std::vector<double>>& rows, const ClusteringResult& r) {
  ASSERT_EQ(r.assignment.size(), rows.size());
  double inertia = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double own = direct_sq_dist(rows[i], r.centroid(r.assignment[i]));
    inertia += own;
    for (std::size_t c = 0; c < r.k; ++c) {
      EXPECT_LE(own, direct_sq_dist(rows[i], r.centroid(c)) + 1e-9) << "point " << i;
    }
  }
  EXPECT_NEAR(r.inertia, inertia, 1e-6 * std::max(1.0, inertia));
  for (std::size_t t = 1; t < r.inertia_history.size(); ++t) {
    EXPECT_LE(r.inertia_history[t], r.inertia_history[t - 1] * (1 + 1e-12) + 1e-12);
  }
  std::size_t total = 0;
  for (auto s : r.cluster_sizes()) total += s;
  EXPECT_EQ(total, rows.size());
}

TEST(HeuristicK, PublishedCorpusValues) {
  EXPECT_EQ(heuristic_k(KMethod::kCan, 276679, 0, 0), 371u);
  EXPECT_EQ(heuristic_k(KMethod::kKaufman, 276679, 4196, 22694542), 52u);
}

TEST(HeuristicK, SmallAndFixed) {
  EXPECT_EQ(heuristic_k(KMethod::kCan, 2, 0, 0), 1u);
  EXPECT_EQ(heuristic_k(KMethod::kCan, 1, 0, 0), 1u);
  EXPECT_EQ(heuristic_k(KMethod::kKaufman, 10, 5, 25), 2u);  // exactly 2
  EXPECT_EQ(heuristic_k(KMethod::kKaufman, 10, 5, 24), 3u);  // 2.08 -> 3
  EXPECT_EQ(heuristic_k(KMethod::kFixed, 0, 0, 0, 110), 110u);
  EXPECT_THROW(heuristic_k(KMethod::kFixed, 10, 1, 1), UsageError);
  EXPECT_THROW(heuristic_k(KMethod::kKaufman, 10, 0, 1), UsageError);
  EXPECT_THROW(parse_k_method("elbow"), UsageError);
}

TEST(KMeans, TwoSeparatedPairs) {
  std::vector<std::vector<double>> rows{{0, 0}, {0, 1}, {10, 0}, {10, 1}};
  // Shift away from the origin so no point is the zero vector.
  for (auto& r : rows) r[1] += 1;
  auto pts = to_points(rows);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = kmeans(pts, 2, {2, seed, 300, 1e-4, 1});
    EXPECT_EQ(r.assignment[0], r.assignment[1]);
    EXPECT_EQ(r.assignment[2], r.assignment[3]);
    EXPECT_NE(r.assignment[0], r.assignment[2]);
    check_invariants(rows, r);
  }
}

TEST(KMeans, SingleClusterIsTheMean) {
  std::vector<std::vector<double>> rows{{1, 2, 0}, {3, 0, 1}, {0, 4, 5}, {2, 2, 2}, {7, 1, 0}};
  auto r = kmeans(to_points(rows), 3, {1, 3, 300, 1e-4, 1});
  std::vector<double> mean(3, 0.0);
  for (const auto& row : rows)
    for (int j = 0; j < 3; ++j) mean[j] += row[j] / rows.size();
  double inertia = 0.0;
  for (const auto& row : rows) inertia += direct_sq_dist(row, mean);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.centroid(0)[j], mean[j], 1e-12);
  EXPECT_NEAR(r.inertia, inertia, 1e-9);
}

TEST(KMeans, RecoversPlantedClusters) {
  const auto p = load_planted();
  ASSERT_EQ(p.rows.size(), 40u);
  auto pts = to_points(p.rows);
  auto r = kmeans(pts, 5, {4, 42, 300, 1e-4, 0});
  std::vector<int> found(r.assignment.begin(), r.assignment.end());
  EXPECT_GE(adjusted_rand(p.labels, found), 0.99);
  check_invariants(p.rows, r);
}

TEST(KMeans, AdjustedRandOracleSanity) {
  EXPECT_DOUBLE_EQ(adjusted_rand({0, 0, 1, 1}, {5, 5, 7, 7}), 1.0);
  EXPECT_LT(adjusted_rand({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0);
}

TEST(KMeans, ReproducibleForSeed) {
  const auto p = load_planted();
  auto pts = to_points(p.rows);
  auto a = kmeans(pts, 5, {6, 9, 300, 1e-4, 1});
  auto b = kmeans(pts, 5, {6, 9, 300, 1e-4, 3});
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, InvariantsOnRandomSparseData) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 20 + rng() % 60, dim = 3 + rng() % 12;
    std::vector<std::vector<double>> rows(n, std::vector<double>(dim, 0.0));
    for (auto& r : rows) {
      for (auto& x : r) x = u(rng) < 0.4 ? std::floor(u(rng) * 5) : 0.0;
      r[rng() % dim] += 1.0;  // keep every point nonzero
    }
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 12);
    auto r = kmeans(to_points(rows), dim, {k, rng(), 100, 1e-6, 1});
    check_invariants(rows, r);
  }
}

TEST(KMeans, KEqualsPointCountWithDuplicates) {
  std::vector<std::vector<double>> rows{{1, 0}, {1, 0}, {1, 0}, {0, 1}, {2, 2}};
  auto r = kmeans(to_points(rows), 2, {5, 1, 50, 0.0, 1});
  check_invariants(rows, r);
}

TEST(KMeans, ZeroVectorsAreAssignedLikeAnyPoint) {
  std::vector<std::vector<double>> rows{{0, 0}, {1, 0}, {1, 0.1}, {5, 5}, {5, 5.1}};
  auto r = kmeans(to_points(rows), 2, {2, 4, 300, 1e-4, 1});
  check_invariants(rows, r);
  EXPECT_EQ(r.assignment[0], r.assignment[1]);
}

TEST(KMeans, Errors) {
  std::vector<DocVector> none;
  EXPECT_THROW(kmeans(none, 2, {1, 0, 10, 1e-4, 1}), UsageError);
  auto pts = to_points({{1, 0}, {0, 0}, {0, 0}});
  EXPECT_THROW(kmeans(pts, 2, {2, 0, 10, 1e-4, 1}), UsageError);  // only one nonzero vector
  EXPECT_THROW(kmeans(pts, 2, {0, 0, 10, 1e-4, 1}), UsageError);
  EXPECT_THROW(kmeans(pts, 2, {1, 0, 0, 1e-4, 1}), UsageError);
}

TEST(ClusteringResult, SaveLoad) {
  auto r = kmeans(to_points({{1, 0}, {0, 1}, {1, 1}}), 2, {2, 5, 10, 1e-4, 1});
  std::stringstream buf;
  r.save(buf);
  auto back = ClusteringResult::load(buf);
  EXPECT_EQ(back.k, r.k);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.article_ids, r.article_ids);
  EXPECT_EQ(back.assignment, r.assignment);
  EXPECT_DOUBLE_EQ(back.inertia, r.inertia);
  std::istringstream bad("#clustering\tK=2\nx\t7\n");
  EXPECT_THROW(ClusteringResult::load(bad), DataError);
}

}  // namespace
}  // namespace venuerec
