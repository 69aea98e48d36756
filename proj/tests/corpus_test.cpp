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

#include <sstream>

#include "venuerec/corpus.hpp"
#include "venuerec/synthgen.hpp"

namespace venuerec {
namespace {

std::string rec(const std::string& id, const std::string& venue, int year,
                const std::string& text = "some text") {
  return R"({"id":")" + id + R"(","venue":")" + venue + R"(","year":)" + std::to_string(year) +
         R"(,"title_abstract":")" + text + R"(","keywords":["k"],"authors":["0000-1"]})";
}

Corpus corpus_with_counts(const std::vector<std::pair<std::string, int>>& counts, int year = 2010) {
  std::vector<Article> arts;
  int n = 0;
  for (const auto& [venue, c] : counts) {
    for (int i = 0; i < c; ++i) {
      arts.push_back({"a" + std::to_string(n++), venue, year, "text", {}, {}});
    }
  }
  return Corpus(std::move(arts));
}

TEST(LoadCorpus, ThreeValidLines) {
  std::istringstream in(rec("a1", "v1", 2010) + "\n" + rec("a2", "v1", 2011) + "\n" +
                        rec("a3", "v2", 2012) + "\n");
  auto r = load_corpus(in);
  EXPECT_EQ(r.corpus.size(), 3u);
  EXPECT_EQ(r.skipped, 0u);
  EXPECT_EQ(r.corpus.venue_counts().at("v1"), 2u);
  EXPECT_EQ(r.corpus.venue_counts().at("v2"), 1u);
}

TEST(LoadCorpus, SkipsRecordMissingVenue) {
  std::istringstream in(rec("a1", "v1", 2010) + "\n" +
                        R"({"id":"a2","year":2010,"title_abstract":"x"})" + "\n");
  auto r = load_corpus(in);
  EXPECT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
}

TEST(LoadCorpus, SkipsMalformedAndFullyEmptyRecords) {
  std::istringstream in("not json\n" + rec("a1", "v1", 2010) + "\n" +
                        R"({"id":"a2","venue":"v","year":2010,"title_abstract":"  ","keywords":[]})" +
                        "\n" + R"({"id":"a3","venue":"v","year":"2010","title_abstract":"t"})" +
                        "\n\n");
  auto r = load_corpus(in);
  EXPECT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.skipped, 3u);
}

TEST(LoadCorpus, KeywordsOnlyArticleIsValid) {
  std::istringstream in(R"({"id":"a","venue":"v","year":2001,"keywords":["x"]})");
  EXPECT_EQ(load_corpus(in).corpus.size(), 1u);
}

TEST(LoadCorpus, DuplicateIdIsFatal) {
  std::istringstream in(rec("a1", "v1", 2010) + "\n" + rec("a1", "v2", 2011) + "\n");
  EXPECT_THROW(load_corpus(in), DataError);
}

TEST(LoadCorpus, UnreadableFileIsFatal) {
  EXPECT_THROW(load_corpus(std::filesystem::path("/nonexistent/corpus.jsonl")), DataError);
}

TEST(LoadCorpus, CustomSchema) {
  CorpusSchema schema;
  schema.id = "pmid";
  schema.venue = "issn";
  std::istringstream in(R"({"pmid":"1","issn":"1234-5678","year":2009,"title_abstract":"t"})");
  auto r = load_corpus(in, schema);
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.corpus.articles()[0].venue, "1234-5678");
}

TEST(LoadCorpus, AuthorIdsAreTrimmedOnly) {
  std::istringstream in(
      R"({"id":"a","venue":"v","year":2001,"title_abstract":"t","authors":[" 0000-ABC ","","X"]})");
  auto r = load_corpus(in);
  EXPECT_EQ(r.corpus.articles()[0].authors, (std::vector<std::string>{"0000-ABC", "X"}));
}

TEST(LoadCorpus, SerializeRoundTrip) {
  SynthParams params;
  params.n_venues = 3;
  params.train_articles_per_venue_topic = 4;
  params.test_articles_per_venue_topic = 1;
  const Corpus c = generate(params);
  std::stringstream buf;
  write_corpus(buf, c);
  auto again = load_corpus(buf);
  EXPECT_EQ(again.skipped, 0u);
  EXPECT_EQ(again.corpus, c);
  EXPECT_EQ(again.corpus.venue_counts(), c.venue_counts());
}

TEST(FilterVenues, ThresholdSemantics) {
  auto c = corpus_with_counts({{"v1", 150}, {"v2", 50}});
  auto f = filter_venues(c, 100);
  EXPECT_EQ(f.size(), 150u);
  EXPECT_EQ(f.num_venues(), 1u);
  EXPECT_TRUE(f.has_venue("v1"));
}

TEST(FilterVenues, MinOneIsIdentity) {
  auto c = corpus_with_counts({{"v1", 3}, {"v2", 1}});
  EXPECT_EQ(filter_venues(c, 1), c);
}

TEST(FilterVenues, BoundaryCountsSurvive) {
  // Direct tally: venues with 120 and 100 articles reach the threshold, 99 does not.
  auto c = corpus_with_counts({{"a", 120}, {"b", 100}, {"c", 99}});
  auto f = filter_venues(c, 100);
  EXPECT_EQ(f.num_venues(), 2u);
  EXPECT_EQ(f.size(), 220u);
}

TEST(FilterVenues, EmptyResultIsFatal) {
  auto c = corpus_with_counts({{"v1", 5}});
  EXPECT_THROW(filter_venues(c, 6), DataError);
  EXPECT_THROW(filter_venues(c, 0), UsageError);
}

TEST(FilterVenues, Idempotent) {
  for (int t : {1, 2, 5, 10}) {
    auto c = corpus_with_counts({{"a", 12}, {"b", 5}, {"c", 2}, {"d", 10}});
    auto once = filter_venues(c, t);
    EXPECT_EQ(filter_venues(once, t), once);
  }
}

TEST(ExcludeVenues, DropsNamedVenues) {
  auto c = corpus_with_counts({{"plos", 10}, {"v", 3}});
  auto e = exclude_venues(c, {"plos"});
  EXPECT_EQ(e.size(), 3u);
  EXPECT_FALSE(e.has_venue("plos"));
}

TEST(SplitByYear, BoundarySemantics) {
  Corpus c({{"a", "v", 2014, "t", {}, {}}, {"b", "v", 2015, "t", {}, {}}, {"c", "v", 2016, "t", {}, {}}});
  auto s = split_by_year(c, {2015});
  EXPECT_EQ(s.train.size(), 2u);
  EXPECT_EQ(s.test.size(), 1u);
  EXPECT_TRUE(s.unseen_venue_ids.empty());
}

TEST(SplitByYear, EmptySideIsFatal) {
  Corpus c({{"a", "v", 2014, "t", {}, {}}, {"b", "v", 2015, "t", {}, {}}});
  EXPECT_THROW(split_by_year(c, {2015}), DataError);
  EXPECT_THROW(split_by_year(c, {2000}), DataError);
  EXPECT_THROW(split_by_year(Corpus{}, {2000}), DataError);
}

TEST(SplitByYear, UnseenVenuesAreKeptAndFlagged) {
  Corpus c({{"a", "v1", 2014, "t", {}, {}}, {"b", "v2", 2016, "t", {}, {}},
            {"c", "v1", 2016, "t", {}, {}}});
  auto s = split_by_year(c, {2015});
  EXPECT_EQ(s.test.size(), 2u);
  EXPECT_EQ(s.unseen_venue_ids, std::vector<std::string>{"b"});
  EXPECT_EQ(s.test.venue_counts().at("v2"), 1u);
}

TEST(SplitByYear, PartitionProperty) {
  auto full = generate(SynthParams{});
  for (int boundary = 2007; boundary <= 2015; ++boundary) {
    auto s = split_by_year(full, {boundary});
    EXPECT_EQ(s.train.size() + s.test.size(), full.size());
    std::set<std::string> ids;
    for (const auto& a : s.train.articles()) ids.insert(a.id);
    for (const auto& a : s.test.articles()) {
      EXPECT_FALSE(ids.count(a.id)) << a.id;
      EXPECT_GT(a.year, boundary);
    }
    for (const auto& a : s.train.articles()) EXPECT_LE(a.year, boundary);
  }
}

TEST(Corpus, CountsSumToSize) {
  auto c = generate(SynthParams{});
  std::size_t total = 0;
  for (const auto& [_, n] : c.venue_counts()) total += n;
  EXPECT_EQ(total, c.size());
}

}  // namespace
}  // namespace venuerec
