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

// venuerec command-line driver. Exit codes: 0 success, 1 usage error,
// 2 data error (bad input, missing or stale artifacts), 3 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "venuerec/config.hpp"
#include "venuerec/stages.hpp"
#include "venuerec/synthgen.hpp"

namespace {

using namespace venuerec;
namespace fs = std::filesystem;

/// Flag values keyed by configuration key; only flags actually given are
/// applied on top of the configuration files.
class Overrides {
 public:
  void add(CLI::App* app, std::initializer_list<std::string_view> keys) {
    add_range(app, keys);
  }

  template <typename Range>
  void add_range(CLI::App* app, const Range& keys) {
    for (std::string_view k : keys) {
      std::string flag = "--" + std::string(k);
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (k == "report") flag = "--out," + flag;
      auto& slot = values_[std::string(k)];
      opts_.emplace_back(std::string(k), app->add_option(flag, slot, std::string(config_key(k).help)));
    }
  }

  std::optional<std::string> given(const std::string& key) const {
    for (const auto& [k, o] : opts_) {
      if (k == key && o->count() > 0) return values_.at(k);
    }
    return std::nullopt;
  }

  void apply(RunConfig& cfg) const {
    for (const auto& [k, o] : opts_) {
      if (o->count() > 0) set_config_value(cfg, k, values_.at(k));
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> opts_;
};

/// defaults < <artifacts>/run.conf < --config file < flags
RunConfig resolve_config(const std::string& config_file, const Overrides& ov) {
  RunConfig probe;
  if (!config_file.empty()) read_config_file(config_file, probe);
  fs::path dir = probe.artifacts;
  if (auto a = ov.given("artifacts")) dir = *a;
  RunConfig cfg;
  if (fs::exists(dir / "run.conf")) read_config_file(dir / "run.conf", cfg);
  if (!config_file.empty()) read_config_file(config_file, cfg);
  ov.apply(cfg);
  cfg.artifacts = dir;
  cfg.validate();
  return cfg;
}

constexpr std::string_view kIngestKeys[] = {
    "corpus", "min_venue_articles", "train_through_year", "exclude_venues"};
constexpr std::string_view kPrepKeys[] = {"max_df", "min_df", "weighting",
                                                            "stopwords"};
constexpr std::string_view kClusterKeys[] = {"k_method", "k", "seed",
                                                               "max_iter", "tol"};
constexpr std::string_view kProfileKeys[] = {"strategy", "author_strategy"};
constexpr std::string_view kQueryKeys[] = {
    "strategy", "author_strategy", "features", "lambda_s", "w_content",
    "w_keywords", "w_authors", "depth", "lambda_blend"};

std::vector<std::string> split_commas(const std::string& s) { return config_detail::split_list(s); }

int run(int argc, char** argv) {
  CLI::App app{"Publication venue recommendation from clustered venue subprofiles"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  Overrides ov;
  app.add_option("--config", config_file, "key = value configuration file");
  ov.add(&app, {"artifacts", "threads"});

  auto* synth = app.add_subcommand("synth", "write a synthetic corpus with planted topics");
  SynthParams params;
  std::string synth_out;
  synth->add_option("--out", synth_out, "output JSONL file")->required();
  synth->add_option("--seed", params.seed, "generator seed")->capture_default_str();
  synth->add_option("--venues", params.n_venues, "number of venues")->capture_default_str();
  synth->add_option("--topics", params.topics_per_venue, "topics per venue")->capture_default_str();
  synth->add_option("--train-per-topic", params.train_articles_per_venue_topic,
                    "training articles per venue topic")->capture_default_str();
  synth->add_option("--test-per-topic", params.test_articles_per_venue_topic,
                    "test articles per venue topic")->capture_default_str();
  synth->add_option("--tokens", params.tokens_per_article, "text tokens per article")
      ->capture_default_str();
  synth->add_option("--noise", params.noise, "share of shared-vocabulary tokens")
      ->capture_default_str();
  synth->add_option("--global-topics", params.global_topics,
                    "topics shared across venues (0: private topics only)")->capture_default_str();
  synth->add_option("--author-loyalty", params.author_loyalty,
                    "chance an author slot is a venue regular")->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "load, filter and split the corpus");
  ov.add_range(ingest, kIngestKeys);
  auto* prep = app.add_subcommand("prep", "build the pruned clustering vocabulary");
  ov.add_range(prep, kPrepKeys);
  auto* cluster = app.add_subcommand("cluster", "k-means over the training articles");
  ov.add_range(cluster, kClusterKeys);
  auto* profiles = app.add_subcommand("profiles", "build venue subprofiles");
  ov.add_range(profiles, kProfileKeys);
  auto* index = app.add_subcommand("index", "index the subprofiles");
  ov.add_range(index, kProfileKeys);
  auto* inspect = index->add_subcommand("inspect", "print index statistics");
  ov.add(inspect, {"strategy"});

  auto* recommend = app.add_subcommand("recommend", "rank venues for one article");
  ov.add_range(recommend, kQueryKeys);
  ov.add(recommend, {"top"});
  std::string article, text, keywords, authors;
  auto* art_opt = recommend->add_option("--article", article,
                                        "file with one JSON article record ('-': stdin)");
  recommend->add_option("--text", text, "title and abstract")->excludes(art_opt);
  recommend->add_option("--keywords", keywords, "comma-separated keywords")->excludes(art_opt);
  recommend->add_option("--authors", authors, "comma-separated author ids")->excludes(art_opt);

  auto* evaluate = app.add_subcommand("evaluate", "score the test split");
  ov.add_range(evaluate, kQueryKeys);
  ov.add(evaluate, {"mrr_cutoff", "sweep_lambda", "report"});

  auto* all = app.add_subcommand("run", "ingest through evaluate in one go");
  for (const auto& k : config_keys()) {
    if (k.name != "artifacts" && k.name != "threads") ov.add(all, {k.name});
  }

  auto* show = app.add_subcommand("config", "print the resolved configuration");
  for (const auto& k : config_keys()) {
    if (k.name != "artifacts" && k.name != "threads") ov.add(show, {k.name});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (synth->parsed()) {
    const auto corpus = generate(params);
    write_atomic(synth_out, [&](std::ostream& o) { write_corpus(o, corpus); });
    log_info("synth: " + std::to_string(corpus.size()) + " articles in " +
             std::to_string(corpus.num_venues()) + " venues written to " + synth_out);
    return 0;
  }

  const auto cfg = resolve_config(config_file, ov);
  Workspace ws(cfg);

  if (show->parsed()) {
    write_config(std::cout, cfg);
    return 0;
  }
  if (recommend->parsed()) {
    ArtifactLock lock(cfg.artifacts, false);
    QueryInput q;
    if (!article.empty()) {
      if (article == "-") {
        q = QueryInput::from_record(std::cin);
      } else {
        std::ifstream in(article);
        if (!in) throw UsageError("cannot read article file " + article);
        q = QueryInput::from_record(in);
      }
    } else {
      q.title_abstract = text;
      q.keywords = split_commas(keywords);
      q.authors = split_commas(authors);
    }
    stage_recommend(ws, q, std::cout);
    return 0;
  }
  if (inspect->parsed()) {
    ArtifactLock lock(cfg.artifacts, false);
    stage_inspect(ws, std::cout);
    return 0;
  }

  ArtifactLock lock(cfg.artifacts, true);
  if (ingest->parsed()) stage_ingest(ws);
  if (prep->parsed()) stage_prep(ws);
  if (cluster->parsed()) stage_cluster(ws);
  if (profiles->parsed()) stage_profiles(ws);
  if (index->parsed()) stage_index(ws);
  if (evaluate->parsed()) stage_evaluate(ws, std::cout);
  if (all->parsed()) {
    stage_ingest(ws);
    if (ws.needs_clustering()) {
      stage_prep(ws);
      stage_cluster(ws);
    }
    stage_profiles(ws);
    stage_index(ws);
    stage_evaluate(ws, std::cout);
  }
  ws.persist_config();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const venuerec::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const venuerec::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
