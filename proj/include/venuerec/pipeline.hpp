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

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "venuerec/cluster.hpp"
#include "venuerec/corpus.hpp"
#include "venuerec/error.hpp"
#include "venuerec/eval.hpp"
#include "venuerec/fusion.hpp"
#include "venuerec/index.hpp"
#include "venuerec/profile.hpp"
#include "venuerec/textprep.hpp"

namespace venuerec {

/// Which evidence ranks the venues.
///   cb       content fields (title+abstract, keywords)
///   au       author field
///   combined CombLinear of a cb ranking and an au ranking
///   naive    one query with content and author clauses summed
enum class Features { kContent, kAuthor, kCombined, kNaive };

inline Features parse_features(std::string_view s) {
  if (s == "cb") return Features::kContent;
  if (s == "au") return Features::kAuthor;
  if (s == "combined") return Features::kCombined;
  if (s == "naive") return Features::kNaive;
  throw UsageError("unknown features '" + std::string(s) + "' (expected cb|au|combined|naive)");
}

inline std::string_view to_string(Features f) {
  switch (f) {
    case Features::kContent: return "cb";
    case Features::kAuthor: return "au";
    case Features::kCombined: return "combined";
    case Features::kNaive: return "naive";
  }
  return "?";
}

struct PipelineConfig {
  // text preparation
  double max_df = 0.9;
  std::size_t min_df = 750;
  Weighting weighting = Weighting::kTfIdf;
  // clustering
  KMethod k_method = KMethod::kKaufman;
  std::size_t k = 110;  // used when k_method is fixed
  std::uint64_t seed = 42;
  int max_iter = 300;
  double tol = 1e-4;
  // profiles and retrieval
  ProfileStrategy strategy = ProfileStrategy::kGroup;
  ProfileStrategy author_strategy = ProfileStrategy::kDistributed;
  Features features = Features::kCombined;
  double lambda_s = 0.1;
  double w_content = 1.0;
  double w_keywords = 1.0;
  double w_authors = 1.0;
  std::size_t depth = 1000;
  // fusion and evaluation
  double lambda_blend = 0.75;
  std::size_t mrr_cutoff = 40;
  unsigned threads = 0;

  void validate() const {
    if (!(max_df > 0.0 && max_df <= 1.0)) throw UsageError("max_df must lie in (0, 1]");
    if (min_df < 1) throw UsageError("min_df must be >= 1");
    if (k_method == KMethod::kFixed && k < 1) throw UsageError("k must be >= 1");
    if (max_iter < 1) throw UsageError("max_iter must be >= 1");
    if (!(tol >= 0.0)) throw UsageError("tol must be >= 0");
    if (!(lambda_s > 0.0 && lambda_s < 1.0)) throw UsageError("lambda_s must lie in (0, 1)");
    if (!(lambda_blend >= 0.0 && lambda_blend <= 1.0)) {
      throw UsageError("lambda_blend must lie in [0, 1]");
    }
    if (depth < 1) throw UsageError("depth must be >= 1");
    if (mrr_cutoff < 1) throw UsageError("mrr_cutoff must be >= 1");
  }

  FieldWeights content_weights() const { return {{w_content, w_keywords, 0.0}}; }
  FieldWeights author_weights() const { return {{0.0, 0.0, w_authors}}; }
  FieldWeights naive_weights() const { return {{w_content, w_keywords, w_authors}}; }

  bool needs_author_index() const {
    return features == Features::kCombined && author_strategy != strategy;
  }
  bool needs_clustering() const {
    return strategy == ProfileStrategy::kGroup ||
           (needs_author_index() && author_strategy == ProfileStrategy::kGroup);
  }
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string fmt_real(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

/// Trained artifacts needed to answer queries.
struct Model {
  StopwordSet stopwords;
  std::optional<Vocabulary> vocab;
  std::optional<ClusteringResult> clustering;
  FieldedIndex content_index;
  /// Only present when the author ranking uses a different strategy.
  std::optional<FieldedIndex> author_index;

  const FieldedIndex& index_for_authors() const {
    return author_index ? *author_index : content_index;
  }
};

/// Tokenizes training text for clustering: title/abstract only.
inline std::vector<std::vector<std::string>> clustering_tokens(const Corpus& train,
                                                               const StopwordSet& stopwords) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(train.size());
  for (const auto& a : train.articles()) docs.push_back(tokenize_and_stem(a.title_abstract, stopwords));
  return docs;
}

inline std::size_t resolve_k(const PipelineConfig& cfg, const Vocabulary& vocab) {
  return heuristic_k(cfg.k_method, vocab.num_docs(), vocab.size(), vocab.nonzeros(), cfg.k);
}

/// Vectorizes the training articles and runs global k-means.
inline ClusteringResult cluster_corpus(const Corpus& train, const Vocabulary& vocab,
                                       const PipelineConfig& cfg, const StopwordSet& stopwords) {
  auto docs = clustering_tokens(train, stopwords);
  std::vector<DocVector> vectors;
  vectors.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    vectors.push_back(vectorize(train.articles()[i].id, docs[i], vocab, cfg.weighting, true));
  }
  KMeansParams p;
  p.k = resolve_k(cfg, vocab);
  p.seed = cfg.seed;
  p.max_iter = cfg.max_iter;
  p.tol = cfg.tol;
  p.threads = cfg.threads;
  return kmeans(vectors, vocab.size(), p);
}

inline Model train_model(const Corpus& train, const PipelineConfig& cfg,
                         StopwordSet stopwords = default_stopwords()) {
  cfg.validate();
  Model model;
  model.stopwords = std::move(stopwords);
  if (cfg.needs_clustering()) {
    auto docs = clustering_tokens(train, model.stopwords);
    model.vocab = build_vocabulary(docs, cfg.max_df, cfg.min_df);
    model.clustering = cluster_corpus(train, *model.vocab, cfg, model.stopwords);
  }
  const auto analyzed = analyze(train, model.stopwords);
  const ClusteringResult* cl = model.clustering ? &*model.clustering : nullptr;
  model.content_index = FieldedIndex::build(build_profiles(analyzed, cfg.strategy, cl));
  if (cfg.needs_author_index()) {
    model.author_index = FieldedIndex::build(build_profiles(analyzed, cfg.author_strategy, cl));
  }
  return model;
}

/// The two venue rankings of one query, already max-normalized.
struct QueryRankings {
  VenueRanking content;
  VenueRanking author;
};

inline QueryRankings rank_venues(const Query& q, const FieldedIndex& content_index,
                                 const FieldedIndex& author_index, const PipelineConfig& cfg) {
  QueryRankings r;
  auto fuse = [&](const FieldedIndex& idx, const FieldWeights& w) {
    return normalize_max(comb_lgdcs(idx.search(q, w, cfg.depth, cfg.lambda_s), idx.doc_venues()));
  };
  switch (cfg.features) {
    case Features::kContent:
      r.content = fuse(content_index, cfg.content_weights());
      break;
    case Features::kAuthor:
      r.author = fuse(content_index, cfg.author_weights());
      break;
    case Features::kNaive:
      r.content = fuse(content_index, cfg.naive_weights());
      break;
    case Features::kCombined:
      r.content = fuse(content_index, cfg.content_weights());
      r.author = fuse(author_index, cfg.author_weights());
      break;
  }
  return r;
}

/// The final venue ranking for a blend weight (ignored unless combined).
inline VenueRanking final_ranking(const QueryRankings& r, Features features, double lambda_blend) {
  switch (features) {
    case Features::kContent:
    case Features::kNaive:
      return r.content;
    case Features::kAuthor:
      return r.author;
    case Features::kCombined:
      return comb_linear(r.content, r.author, {lambda_blend});
  }
  return {};
}

struct EvalReport {
  Metrics metrics;
  std::size_t n_unseen_venue = 0;
  // configuration fingerprint
  std::string features;
  std::string strategy;
  std::string author_strategy;
  std::size_t k = 0;  // 0 when no clustering was used
  std::uint64_t seed = 0;
  double lambda_s = 0.0;
  double lambda_blend = 0.0;
  std::size_t depth = 0;

  std::string fingerprint() const {
    std::ostringstream os;
    os << features << '|' << strategy << '|' << author_strategy << '|' << k << '|' << seed << '|'
       << fmt_real(lambda_s) << '|' << fmt_real(lambda_blend) << '|' << depth;
    return fnv1a_hex(os.str());
  }

  static std::string csv_header() {
    return "fingerprint,features,strategy,author_strategy,k,seed,lambda_s,lambda_blend,depth,"
           "n_queries,n_unseen_venue,acc1,acc5,acc10,mrr";
  }

  std::string csv_row() const {
    std::ostringstream os;
    os << fingerprint() << ',' << features << ',' << strategy << ',' << author_strategy << ','
       << k << ',' << seed << ',' << fmt_real(lambda_s) << ',' << fmt_real(lambda_blend) << ','
       << depth << ',' << metrics.n_queries << ',' << n_unseen_venue << ','
       << fmt_real(metrics.acc1) << ',' << fmt_real(metrics.acc5) << ','
       << fmt_real(metrics.acc10) << ',' << fmt_real(metrics.mrr);
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    os << "features=" << features << " strategy=" << strategy;
    if (features == "combined") os << " author_strategy=" << author_strategy;
    os << " K=" << k << " seed=" << seed << " lambda_s=" << fmt_real(lambda_s)
       << " lambda_blend=" << fmt_real(lambda_blend) << " depth=" << depth << '\n'
       << "  queries=" << metrics.n_queries << " (unseen venue: " << n_unseen_venue << ")\n"
       << std::fixed << std::setprecision(4) << "  acc@1=" << metrics.acc1
       << " acc@5=" << metrics.acc5 << " acc@10=" << metrics.acc10 << " MRR=" << metrics.mrr
       << '\n';
    return os.str();
  }
};

/// Runs every test article as a query and scores the result for each
/// blend weight in `lambdas` (one report per weight; a single report when
/// the features do not blend).
inline std::vector<EvalReport> evaluate_model(const Model& model, const Corpus& train,
                                              const Corpus& test, const PipelineConfig& cfg,
                                              std::vector<double> lambdas = {}) {
  cfg.validate();
  if (test.empty()) throw DataError("empty test set");
  if (lambdas.empty() || cfg.features != Features::kCombined) lambdas = {cfg.lambda_blend};
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw UsageError("lambda_blend must lie in [0, 1]");
  }
  const auto& arts = test.articles();
  std::vector<std::vector<Rank>> ranks(lambdas.size(), std::vector<Rank>(arts.size()));
  detail::parallel_for(arts.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto q = Query::from(analyze(arts[i], model.stopwords));
      const auto rankings =
          rank_venues(q, model.content_index, model.index_for_authors(), cfg);
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        ranks[l][i] = rank_of_truth(final_ranking(rankings, cfg.features, lambdas[l]),
                                    arts[i].venue);
      }
    }
  });
  std::size_t unseen = 0;
  for (const auto& a : arts) {
    if (!train.has_venue(a.venue)) ++unseen;
  }
  std::vector<EvalReport> out;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    EvalReport r;
    r.metrics = compute_metrics(ranks[l], cfg.mrr_cutoff);
    r.n_unseen_venue = unseen;
    r.features = std::string(to_string(cfg.features));
    r.strategy = std::string(to_string(cfg.strategy));
    r.author_strategy = std::string(to_string(cfg.author_strategy));
    r.k = model.clustering ? model.clustering->k : 0;
    r.seed = cfg.seed;
    r.lambda_s = cfg.lambda_s;
    r.lambda_blend = lambdas[l];
    r.depth = cfg.depth;
    out.push_back(std::move(r));
  }
  return out;
}

/// Train on `train`, evaluate on `test`.
inline EvalReport run_evaluation(const Corpus& train, const Corpus& test, const PipelineConfig& cfg,
                                 StopwordSet stopwords = default_stopwords()) {
  const auto model = train_model(train, cfg, std::move(stopwords));
  return evaluate_model(model, train, test, cfg).front();
}

/// Inclusive lambda grid from "start:stop:step".
inline std::vector<double> parse_sweep(std::string_view params) {
  std::vector<double> parts;
  std::string s(params);
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad sweep range '" + s + "' (expected start:stop:step)");
    }
  }
  if (parts.size() != 3 || parts[2] <= 0.0 || parts[0] > parts[1]) {
    throw UsageError("bad sweep range '" + s + "' (expected start:stop:step)");
  }
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    // Rounded to 1e-12 so 0.05 steps print as 0.05, 0.1, ...
    out.push_back(std::round((parts[0] + static_cast<double>(i) * parts[2]) * 1e12) / 1e12);
  }
  return out;
}

}  // namespace venuerec
