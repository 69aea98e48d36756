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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "venuerec/corpus.hpp"
#include "venuerec/error.hpp"
#include "venuerec/pipeline.hpp"

namespace venuerec {

/// Everything a CLI run needs. Persisted as `key = value` lines.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path artifacts = "artifacts";
  std::size_t min_venue_articles = 100;
  int train_through_year = 2015;
  std::vector<std::string> exclude_venues;
  /// Empty means the built-in English list.
  std::filesystem::path stopwords;
  PipelineConfig pipeline;
  std::size_t top = 10;
  /// "start:stop:step" or empty.
  std::string sweep_lambda;
  /// Empty means <artifacts>/report.csv.
  std::filesystem::path report;

  std::filesystem::path report_path() const {
    return report.empty() ? artifacts / "report.csv" : report;
  }

  void validate() const {
    pipeline.validate();
    if (min_venue_articles < 1) throw UsageError("min_venue_articles must be >= 1");
    if (top < 1) throw UsageError("top must be >= 1");
    if (!sweep_lambda.empty()) parse_sweep(sweep_lambda);
    if (artifacts.empty()) throw UsageError("artifacts directory must be set");
  }
};

namespace config_detail {

inline std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view key, const std::string& s) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
    throw UsageError("bad value '" + s + "' for " + std::string(key));
  }
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string join_list(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace config_detail

struct ConfigKey {
  std::string_view name;
  std::string_view help;
  void (*set)(RunConfig&, const std::string&);
  std::string (*get)(const RunConfig&);
};

// Field accessor boilerplate for the key table.
#define VENUEREC_KEY_SIZE(NAME, FIELD, HELP)                                                   \
  ConfigKey {                                                                                  \
    NAME, HELP,                                                                                \
        [](RunConfig& c, const std::string& s) {                                               \
          c.FIELD = config_detail::parse_number<std::size_t>(NAME, s);                         \
        },                                                                                     \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                             \
  }
#define VENUEREC_KEY_REAL(NAME, FIELD, HELP)                                                   \
  ConfigKey {                                                                                  \
    NAME, HELP,                                                                                \
        [](RunConfig& c, const std::string& s) {                                               \
          c.FIELD = config_detail::parse_number<double>(NAME, s);                              \
        },                                                                                     \
        [](const RunConfig& c) { return config_detail::fmt_double(c.FIELD); }                  \
  }
#define VENUEREC_KEY_PATH(NAME, FIELD, HELP)                                                   \
  ConfigKey {                                                                                  \
    NAME, HELP, [](RunConfig& c, const std::string& s) { c.FIELD = s; },                       \
        [](const RunConfig& c) { return c.FIELD.string(); }                                    \
  }

/// Every configuration key, in the order they are written.
inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      VENUEREC_KEY_PATH("corpus", corpus, "line-delimited JSON corpus file"),
      VENUEREC_KEY_PATH("artifacts", artifacts, "artifacts directory"),
      VENUEREC_KEY_SIZE("min_venue_articles", min_venue_articles,
                        "drop venues with fewer articles"),
      ConfigKey{"train_through_year", "last publication year of the training split",
                [](RunConfig& c, const std::string& s) {
                  c.train_through_year = config_detail::parse_number<int>("train_through_year", s);
                },
                [](const RunConfig& c) { return std::to_string(c.train_through_year); }},
      ConfigKey{"exclude_venues", "comma-separated venue ids to drop",
                [](RunConfig& c, const std::string& s) {
                  c.exclude_venues = config_detail::split_list(s);
                },
                [](const RunConfig& c) { return config_detail::join_list(c.exclude_venues); }},
      VENUEREC_KEY_REAL("max_df", pipeline.max_df, "drop terms in more than this share of docs"),
      VENUEREC_KEY_SIZE("min_df", pipeline.min_df, "drop terms in fewer docs"),
      ConfigKey{"weighting", "clustering term weights: tf|tfidf",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.weighting = parse_weighting(s);
                },
                [](const RunConfig& c) { return std::string(to_string(c.pipeline.weighting)); }},
      VENUEREC_KEY_PATH("stopwords", stopwords, "stopword file, one per line (empty: built-in)"),
      ConfigKey{"k_method", "cluster count heuristic: can|kaufman|fixed",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.k_method = parse_k_method(s);
                },
                [](const RunConfig& c) { return std::string(to_string(c.pipeline.k_method)); }},
      VENUEREC_KEY_SIZE("k", pipeline.k, "cluster count for k_method=fixed"),
      ConfigKey{"seed", "k-means seed",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.seed = config_detail::parse_number<std::uint64_t>("seed", s);
                },
                [](const RunConfig& c) { return std::to_string(c.pipeline.seed); }},
      ConfigKey{"max_iter", "k-means iteration cap",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.max_iter = config_detail::parse_number<int>("max_iter", s);
                },
                [](const RunConfig& c) { return std::to_string(c.pipeline.max_iter); }},
      VENUEREC_KEY_REAL("tol", pipeline.tol, "k-means centroid shift tolerance"),
      ConfigKey{"strategy", "content profiles: sp|dp|gp",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.strategy = parse_strategy(s);
                },
                [](const RunConfig& c) { return std::string(to_string(c.pipeline.strategy)); }},
      ConfigKey{"author_strategy", "author profiles for combined features: sp|dp|gp",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.author_strategy = parse_strategy(s);
                },
                [](const RunConfig& c) {
                  return std::string(to_string(c.pipeline.author_strategy));
                }},
      ConfigKey{"features", "ranking evidence: cb|au|combined|naive",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.features = parse_features(s);
                },
                [](const RunConfig& c) { return std::string(to_string(c.pipeline.features)); }},
      VENUEREC_KEY_REAL("lambda_s", pipeline.lambda_s, "Jelinek-Mercer smoothing weight"),
      VENUEREC_KEY_REAL("w_content", pipeline.w_content, "title/abstract field weight"),
      VENUEREC_KEY_REAL("w_keywords", pipeline.w_keywords, "keywords field weight"),
      VENUEREC_KEY_REAL("w_authors", pipeline.w_authors, "authors field weight"),
      VENUEREC_KEY_SIZE("depth", pipeline.depth, "subprofiles retrieved per query"),
      VENUEREC_KEY_REAL("lambda_blend", pipeline.lambda_blend,
                        "content share of the combined ranking"),
      VENUEREC_KEY_SIZE("mrr_cutoff", pipeline.mrr_cutoff, "ranks beyond this add 0 to MRR"),
      ConfigKey{"threads", "worker threads (0: hardware)",
                [](RunConfig& c, const std::string& s) {
                  c.pipeline.threads = config_detail::parse_number<unsigned>("threads", s);
                },
                [](const RunConfig& c) { return std::to_string(c.pipeline.threads); }},
      VENUEREC_KEY_SIZE("top", top, "venues printed by recommend"),
      ConfigKey{"sweep_lambda", "lambda_blend grid start:stop:step for evaluate",
                [](RunConfig& c, const std::string& s) { c.sweep_lambda = s; },
                [](const RunConfig& c) { return c.sweep_lambda; }},
      VENUEREC_KEY_PATH("report", report, "evaluation CSV (empty: <artifacts>/report.csv)"),
  };
  return keys;
}

#undef VENUEREC_KEY_SIZE
#undef VENUEREC_KEY_REAL
#undef VENUEREC_KEY_PATH

inline const ConfigKey& config_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return k;
  }
  throw UsageError("unknown configuration key '" + std::string(name) + "'");
}

inline void set_config_value(RunConfig& cfg, std::string_view key, const std::string& value) {
  config_key(key).set(cfg, detail::trim(value));
}

inline std::string get_config_value(const RunConfig& cfg, std::string_view key) {
  return config_key(key).get(cfg);
}

/// Applies `key = value` lines. Blank lines and lines starting with '#'
/// are ignored.
inline void read_config(std::istream& in, RunConfig& cfg, const std::string& source = "<config>") {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw UsageError(where + "expected 'key = value'");
    try {
      set_config_value(cfg, detail::trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const std::exception& e) {
      throw UsageError(where + e.what());
    }
  }
}

inline void read_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  read_config(in, cfg, path.string());
}

inline void write_config(std::ostream& out, const RunConfig& cfg) {
  out << "# venuerec run configuration\n";
  for (const auto& k : config_keys()) out << k.name << " = " << k.get(cfg) << '\n';
}

inline std::string config_text(const RunConfig& cfg) {
  std::ostringstream os;
  write_config(os, cfg);
  return os.str();
}

}  // namespace venuerec
