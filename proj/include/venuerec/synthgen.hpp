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
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "venuerec/corpus.hpp"
#include "venuerec/error.hpp"

namespace venuerec {

/// Parameters of a planted venue-topic corpus.
///
/// Every (venue, topic) pair owns a private vocabulary. When
/// `global_topics` > 0, each venue additionally draws its topics from a
/// pool of global topics whose vocabularies are shared across venues, and
/// `topic_share` of every article's topical tokens come from that shared
/// topic vocabulary instead of the private one. `noise` is the fraction of
/// tokens drawn from the collection-wide shared vocabulary.
struct SynthParams {
  std::size_t n_venues = 20;
  std::size_t topics_per_venue = 3;
  std::size_t vocab_per_topic = 30;
  std::size_t shared_vocab_size = 200;
  std::size_t train_articles_per_venue_topic = 40;
  std::size_t test_articles_per_venue_topic = 5;
  std::size_t authors_per_venue = 30;
  double author_loyalty = 0.6;
  std::size_t max_authors_per_article = 4;
  std::size_t tokens_per_article = 20;
  std::size_t keywords_per_article = 3;
  double noise = 0.25;
  std::size_t global_topics = 10;
  double topic_share = 0.8;
  /// Let a venue's topic slots repeat a global topic, giving venues uneven
  /// topical concentration.
  bool global_topics_with_replacement = true;
  int first_train_year = 2007;
  int last_train_year = 2015;
  std::uint64_t seed = 1;

  void validate() const {
    auto positive = [](std::size_t v, const char* name) {
      if (v < 1) throw UsageError(std::string("synthetic corpus: ") + name + " must be >= 1");
    };
    positive(n_venues, "n_venues");
    positive(topics_per_venue, "topics_per_venue");
    positive(vocab_per_topic, "vocab_per_topic");
    positive(train_articles_per_venue_topic, "train_articles_per_venue_topic");
    positive(test_articles_per_venue_topic, "test_articles_per_venue_topic");
    positive(authors_per_venue, "authors_per_venue");
    positive(max_authors_per_article, "max_authors_per_article");
    positive(tokens_per_article, "tokens_per_article");
    for (double p : {author_loyalty, noise, topic_share}) {
      if (!(p >= 0.0 && p <= 1.0)) throw UsageError("synthetic corpus: probabilities lie in [0, 1]");
    }
    if (noise > 0.0 && shared_vocab_size == 0) {
      throw UsageError("synthetic corpus: noise needs a shared vocabulary");
    }
    if (global_topics > 0 && !global_topics_with_replacement && global_topics < topics_per_venue) {
      throw UsageError("synthetic corpus: global_topics must be >= topics_per_venue");
    }
    if (first_train_year < 1 || first_train_year > last_train_year) {
      throw UsageError("synthetic corpus: bad training year range");
    }
  }
};

namespace synth {

inline constexpr std::string_view kConsonants = "bdfgklmnprtvz";
inline constexpr std::string_view kVowels = "aou";
inline constexpr std::size_t kSyllables = 13 * 3;
inline constexpr std::size_t kLexiconSize = kSyllables * kSyllables * kSyllables;

/// Three consonant-vowel syllables; such words pass the stemmer unchanged.
inline std::string lexicon_word(std::size_t i) {
  std::string w;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = i % kSyllables;
    i /= kSyllables;
    w += kConsonants[syl / 3];
    w += kVowels[syl % 3];
  }
  return w;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

/// Zipf(1) sampler over a word list.
class ZipfPicker {
 public:
  explicit ZipfPicker(std::vector<std::string> words) : words_(std::move(words)) {
    double acc = 0.0;
    for (std::size_t r = 0; r < words_.size(); ++r) {
      acc += 1.0 / static_cast<double>(r + 1);
      cdf_.push_back(acc);
    }
  }
  const std::string& pick(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return words_[std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                        words_.size() - 1)];
  }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::vector<double> cdf_;
};

}  // namespace synth

/// Everything the generator planted, for tests that need ground truth.
struct SynthTruth {
  /// Private vocabulary per (venue, topic), indexed venue * topics + topic.
  std::vector<std::vector<std::string>> topic_vocab;
  std::vector<std::string> shared_vocab;
  /// Planted (venue, topic) slot of every article, keyed by article id.
  std::vector<std::pair<std::string, std::size_t>> article_slot;
};

struct SynthCorpus {
  Corpus corpus;
  SynthTruth truth;
};

inline std::string synth_venue_id(std::size_t v) {
  std::ostringstream os;
  os << 'V' << std::setw(3) << std::setfill('0') << v;
  return os.str();
}

inline std::string synth_author_id(std::size_t venue, std::size_t a) {
  std::ostringstream os;
  os << "0000-" << std::setw(4) << std::setfill('0') << venue << '-' << std::setw(4) << a
     << "-000X";
  return os.str();
}

inline SynthCorpus generate_with_truth(const SynthParams& params) {
  params.validate();
  const std::size_t slots = params.n_venues * params.topics_per_venue;
  const std::size_t need =
      (slots + params.global_topics) * params.vocab_per_topic + params.shared_vocab_size;
  if (need > synth::kLexiconSize) {
    throw UsageError("synthetic corpus needs " + std::to_string(need) +
                     " distinct words; the lexicon has " + std::to_string(synth::kLexiconSize));
  }
  synth::Rng rng(params.seed);

  // Sample distinct lexicon entries without replacement (partial shuffle).
  std::vector<std::size_t> lex(synth::kLexiconSize);
  std::iota(lex.begin(), lex.end(), std::size_t{0});
  for (std::size_t i = 0; i < need; ++i) {
    std::swap(lex[i], lex[i + rng.below(lex.size() - i)]);
  }
  std::size_t next = 0;
  auto take = [&](std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(synth::lexicon_word(lex[next++]));
    return out;
  };

  SynthCorpus result;
  auto& truth = result.truth;
  std::vector<synth::ZipfPicker> private_topics;
  for (std::size_t s = 0; s < slots; ++s) {
    truth.topic_vocab.push_back(take(params.vocab_per_topic));
    private_topics.emplace_back(truth.topic_vocab.back());
  }
  std::vector<synth::ZipfPicker> global_topics;
  for (std::size_t g = 0; g < params.global_topics; ++g) global_topics.emplace_back(take(params.vocab_per_topic));
  truth.shared_vocab = take(params.shared_vocab_size);
  std::optional<synth::ZipfPicker> shared;
  if (!truth.shared_vocab.empty()) shared.emplace(truth.shared_vocab);

  // Global topic chosen by each (venue, topic) slot.
  std::vector<std::size_t> slot_global(slots, 0);
  if (params.global_topics > 0) {
    for (std::size_t v = 0; v < params.n_venues; ++v) {
      std::vector<std::size_t> pool(params.global_topics);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t t = 0; t < params.topics_per_venue; ++t) {
        if (params.global_topics_with_replacement) {
          slot_global[v * params.topics_per_venue + t] = rng.below(pool.size());
          continue;
        }
        std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
        slot_global[v * params.topics_per_venue + t] = pool[t];
      }
    }
  }

  static constexpr std::string_view kFiller[] = {"the", "of", "and", "in", "with", "for"};
  std::vector<Article> articles;
  std::size_t serial = 0;
  const std::size_t per_slot =
      params.train_articles_per_venue_topic + params.test_articles_per_venue_topic;
  const std::size_t authors_per_topic =
      std::max<std::size_t>(1, params.authors_per_venue / params.topics_per_venue);

  for (std::size_t v = 0; v < params.n_venues; ++v) {
    for (std::size_t t = 0; t < params.topics_per_venue; ++t) {
      const std::size_t slot = v * params.topics_per_venue + t;
      for (std::size_t i = 0; i < per_slot; ++i) {
        const bool is_test = i >= params.train_articles_per_venue_topic;
        Article a;
        std::ostringstream id;
        id << 'A' << std::setw(7) << std::setfill('0') << serial++;
        a.id = id.str();
        a.venue = synth_venue_id(v);
        a.year = is_test ? params.last_train_year + 1
                         : params.first_train_year +
                               static_cast<int>(rng.below(static_cast<std::size_t>(
                                   params.last_train_year - params.first_train_year + 1)));
        auto topical = [&]() -> const std::string& {
          if (params.global_topics > 0 && rng.bernoulli(params.topic_share)) {
            return global_topics[slot_global[slot]].pick(rng);
          }
          return private_topics[slot].pick(rng);
        };
        std::string text;
        for (std::size_t k = 0; k < params.tokens_per_article; ++k) {
          if (!text.empty()) text += ' ';
          if (rng.bernoulli(0.1)) {
            text += kFiller[rng.below(std::size(kFiller))];
            text += ' ';
          }
          text += (shared && rng.bernoulli(params.noise)) ? shared->pick(rng) : topical();
        }
        a.title_abstract = std::move(text);
        for (std::size_t k = 0; k < params.keywords_per_article; ++k) a.keywords.push_back(topical());

        const std::size_t n_auth = 1 + rng.below(params.max_authors_per_article);
        for (std::size_t k = 0; k < n_auth; ++k) {
          std::string au;
          if (rng.bernoulli(params.author_loyalty)) {
            // Loyal authors mostly stay within the article's topic group.
            std::size_t idx = rng.bernoulli(0.7)
                                  ? (t * authors_per_topic + rng.below(authors_per_topic)) %
                                        params.authors_per_venue
                                  : rng.below(params.authors_per_venue);
            au = synth_author_id(v, idx);
          } else {
            au = synth_author_id(rng.below(params.n_venues), rng.below(params.authors_per_venue));
          }
          if (std::find(a.authors.begin(), a.authors.end(), au) == a.authors.end()) {
            a.authors.push_back(std::move(au));
          }
        }
        truth.article_slot.emplace_back(a.id, slot);
        articles.push_back(std::move(a));
      }
    }
  }
  result.corpus = Corpus(std::move(articles));
  return result;
}

inline Corpus generate(const SynthParams& params) { return generate_with_truth(params).corpus; }

}  // namespace venuerec
