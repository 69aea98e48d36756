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

#include <set>

#include "venuerec/porter.hpp"
#include "venuerec/synthgen.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec {
namespace {

TEST(Synthgen, DefaultParamCounts) {
  SynthParams params;
  auto c = generate(params);
  EXPECT_EQ(c.size(), 2700u);
  EXPECT_EQ(c.num_venues(), 20u);
  auto split = split_by_year(c, {});
  EXPECT_EQ(split.train.size(), 2400u);
  EXPECT_EQ(split.test.size(), 300u);
  EXPECT_TRUE(split.unseen_venue_ids.empty());
  for (const auto& [v, n] : split.train.venue_counts()) EXPECT_EQ(n, 120u) << v;
}

TEST(Synthgen, Deterministic) {
  SynthParams params;
  params.n_venues = 5;
  auto a = generate(params);
  auto b = generate(params);
  EXPECT_EQ(a.articles(), b.articles());
  params.seed = 2;
  EXPECT_NE(generate(params).articles(), a.articles());
}

TEST(Synthgen, ArticlesAreWellFormed) {
  SynthParams params;
  params.n_venues = 4;
  const auto corpus = generate(params);
  for (const auto& a : corpus.articles()) {
    EXPECT_FALSE(a.title_abstract.empty());
    EXPECT_EQ(a.keywords.size(), params.keywords_per_article);
    EXPECT_GE(a.authors.size(), 1u);
    EXPECT_LE(a.authors.size(), params.max_authors_per_article);
    EXPECT_EQ(std::set<std::string>(a.authors.begin(), a.authors.end()).size(), a.authors.size());
    EXPECT_GE(a.year, params.first_train_year);
    EXPECT_LE(a.year, params.last_train_year + 1);
  }
}

TEST(Synthgen, LexiconWordsSurvivePreprocessing) {
  const auto& stop = default_stopwords();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < synth::kLexiconSize; i += 7) {
    const auto w = synth::lexicon_word(i);
    EXPECT_EQ(porter_stem(w), w);
    EXPECT_EQ(stop.count(w), 0u) << w;
    EXPECT_TRUE(seen.insert(w).second) << w;
  }
}

TEST(Synthgen, TopicVocabulariesAreDisjoint) {
  auto s = generate_with_truth(SynthParams{});
  std::set<std::string> all;
  std::size_t total = 0;
  for (const auto& v : s.truth.topic_vocab) {
    all.insert(v.begin(), v.end());
    total += v.size();
  }
  all.insert(s.truth.shared_vocab.begin(), s.truth.shared_vocab.end());
  total += s.truth.shared_vocab.size();
  EXPECT_EQ(all.size(), total);
  EXPECT_EQ(s.truth.topic_vocab.size(), 60u);
}

TEST(Synthgen, NoiselessPrivateTopicsAreSeparable) {
  SynthParams params;
  params.noise = 0.0;
  params.global_topics = 0;
  auto s = generate_with_truth(params);
  const auto& stop = default_stopwords();
  ASSERT_EQ(s.truth.article_slot.size(), s.corpus.size());
  for (std::size_t i = 0; i < s.corpus.size(); ++i) {
    const auto& a = s.corpus.articles()[i];
    ASSERT_EQ(s.truth.article_slot[i].first, a.id);
    const auto& vocab = s.truth.topic_vocab[s.truth.article_slot[i].second];
    const std::set<std::string> allowed(vocab.begin(), vocab.end());
    for (const auto& tok : tokenize_and_stem(a.title_abstract, stop)) {
      EXPECT_EQ(allowed.count(tok), 1u) << a.id << " " << tok;
    }
    for (const auto& kw : a.keywords) EXPECT_EQ(allowed.count(kw), 1u);
  }
}

TEST(Synthgen, RejectsInvalidParams) {
  SynthParams params;
  params.vocab_per_topic = synth::kLexiconSize;
  EXPECT_THROW(generate(params), UsageError);
  params = {};
  params.n_venues = 0;
  EXPECT_THROW(generate(params), UsageError);
  params = {};
  params.noise = 1.5;
  EXPECT_THROW(generate(params), UsageError);
  params = {};
  params.shared_vocab_size = 0;
  EXPECT_THROW(generate(params), UsageError);
  params = {};
  params.first_train_year = 2020;
  EXPECT_THROW(generate(params), UsageError);
}

}  // namespace
}  // namespace venuerec
