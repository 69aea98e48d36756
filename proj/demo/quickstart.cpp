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

// Trains a group-profile recommender on a small synthetic corpus, reports
// test metrics and shows the ranking for one held-out article.

#include <iostream>

#include "venuerec.hpp"

int main() {
  using namespace venuerec;

  SynthParams params;
  params.n_venues = 8;
  params.train_articles_per_venue_topic = 25;
  const auto split = split_by_year(generate(params), {});

  PipelineConfig cfg;
  cfg.min_df = 5;
  cfg.lambda_s = 0.7;
  cfg.features = Features::kCombined;
  const auto model = train_model(split.train, cfg);
  std::cout << "K = " << model.clustering->k << ", "
            << model.content_index.num_docs() << " subprofiles\n";

  const auto report = evaluate_model(model, split.train, split.test, cfg).front();
  std::cout << report.text();

  const auto& article = split.test.articles().front();
  const auto q = Query::from(analyze(article, model.stopwords));
  const auto rankings = rank_venues(q, model.content_index, model.index_for_authors(), cfg);
  const auto ranking = final_ranking(rankings, cfg.features, cfg.lambda_blend);
  std::cout << "article " << article.id << " (published in " << article.venue << "):\n";
  for (std::size_t i = 0; i < ranking.size() && i < 5; ++i) {
    std::cout << "  " << i + 1 << ". " << ranking[i].venue << "  " << ranking[i].score << '\n';
  }
}
