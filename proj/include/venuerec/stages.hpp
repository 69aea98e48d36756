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

// Pipeline stages over an artifacts directory. Each stage writes its outputs
// atomically together with a `<stage>.meta` file recording the parameters
// and upstream fingerprints it was built from; consumers re-check that chain
// and refuse to run on stale or mismatched artifacts.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "venuerec/config.hpp"
#include "venuerec/pipeline.hpp"

namespace venuerec {

namespace fs = std::filesystem;

/// flock(2) on <dir>/.lock: exclusive for writers, shared for readers.
class ArtifactLock {
 public:
  ArtifactLock(const fs::path& dir, bool exclusive) {
    fs::create_directories(dir);
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw DataError("cannot open lock file " + path.string());
    if (::flock(fd_, (exclusive ? LOCK_EX : LOCK_SH) | LOCK_NB) != 0) {
      ::close(fd_);
      throw DataError("artifacts directory " + dir.string() +
                      " is in use by another venuerec process");
    }
  }
  ArtifactLock(const ArtifactLock&) = delete;
  ArtifactLock& operator=(const ArtifactLock&) = delete;
  ~ArtifactLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

/// Writes through a sibling temp file and renames it into place.
inline void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& fill) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write " + tmp.string());
      fill(out);
      out.flush();
      if (!out) throw DataError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

inline std::string file_fingerprint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct StageMeta {
  std::string stage;
  std::string fingerprint;
  KeyValues params;  // must match the current configuration
  KeyValues info;    // descriptive only
  KeyValues deps;    // upstream stage -> fingerprint it was built from

  std::string compute_fingerprint() const {
    std::ostringstream os;
    os << stage << '\n';
    for (const auto* kvs : {&params, &info, &deps}) {
      for (const auto& [k, v] : *kvs) os << k << '=' << v << '\n';
      os << '\n';
    }
    return fnv1a_hex(os.str());
  }

  void write(std::ostream& out) const {
    out << "stage = " << stage << '\n' << "fingerprint = " << fingerprint << '\n';
    for (const auto& [k, v] : params) out << "param." << k << " = " << v << '\n';
    for (const auto& [k, v] : info) out << "info." << k << " = " << v << '\n';
    for (const auto& [k, v] : deps) out << "dep." << k << " = " << v << '\n';
  }

  static StageMeta read(std::istream& in) {
    StageMeta m;
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      auto key = line.substr(0, eq);
      auto val = line.substr(eq + 3);
      auto take = [&](std::string_view prefix, KeyValues& into) {
        if (key.rfind(prefix, 0) != 0) return false;
        into.emplace_back(key.substr(prefix.size()), val);
        return true;
      };
      if (key == "stage") m.stage = val;
      else if (key == "fingerprint") m.fingerprint = val;
      else if (!take("param.", m.params) && !take("info.", m.info)) take("dep.", m.deps);
    }
    return m;
  }

  std::string info_value(const std::string& key) const {
    for (const auto& [k, v] : info) {
      if (k == key) return v;
    }
    return {};
  }
};

/// Artifact layout and stage bookkeeping for one artifacts directory.
class Workspace {
 public:
  explicit Workspace(RunConfig cfg) : cfg_(std::move(cfg)) {}

  const RunConfig& config() const { return cfg_; }
  const fs::path& dir() const { return cfg_.artifacts; }

  fs::path train_path() const { return dir() / "train.jsonl"; }
  fs::path test_path() const { return dir() / "test.jsonl"; }
  fs::path vocab_path() const { return dir() / "vocab.tsv"; }
  fs::path clustering_path() const { return dir() / "clustering.tsv"; }
  fs::path profiles_path(ProfileStrategy s) const {
    return dir() / ("profiles-" + std::string(to_string(s)) + ".jsonl");
  }
  fs::path index_dir(ProfileStrategy s) const {
    return dir() / ("index-" + std::string(to_string(s)));
  }
  fs::path meta_path(const std::string& stage) const { return dir() / (stage + ".meta"); }
  fs::path resolved_config_path() const { return dir() / "run.conf"; }

  static std::string profiles_stage(ProfileStrategy s) {
    return "profiles-" + std::string(to_string(s));
  }
  static std::string index_stage(ProfileStrategy s) {
    return "index-" + std::string(to_string(s));
  }

  /// Profile strategies the current configuration works with.
  std::vector<ProfileStrategy> strategies() const {
    std::vector<ProfileStrategy> out{cfg_.pipeline.strategy};
    if (cfg_.pipeline.author_strategy != cfg_.pipeline.strategy) {
      out.push_back(cfg_.pipeline.author_strategy);
    }
    return out;
  }

  bool needs_clustering() const {
    auto s = strategies();
    return std::find(s.begin(), s.end(), ProfileStrategy::kGroup) != s.end();
  }

  StopwordSet stopwords() const {
    return cfg_.stopwords.empty() ? default_stopwords() : load_stopwords(cfg_.stopwords);
  }

  /// Parameters a stage's artifacts must have been built with.
  KeyValues expected_params(const std::string& stage) const {
    auto v = [&](std::string_view key) {
      return std::pair<std::string, std::string>(key, get_config_value(cfg_, key));
    };
    if (stage == "ingest") {
      auto excl = cfg_.exclude_venues;
      std::sort(excl.begin(), excl.end());
      return {v("corpus"), v("min_venue_articles"), v("train_through_year"),
              {"exclude_venues", config_detail::join_list(excl)}};
    }
    if (stage == "prep") {
      return {v("max_df"), v("min_df"), v("weighting"), v("stopwords"), stopwords_hash()};
    }
    if (stage == "cluster") {
      KeyValues p{v("k_method")};
      if (cfg_.pipeline.k_method == KMethod::kFixed) p.push_back(v("k"));
      p.insert(p.end(), {v("seed"), v("max_iter"), v("tol")});
      return p;
    }
    if (stage.rfind("profiles-", 0) == 0) return {v("stopwords"), stopwords_hash()};
    return {};
  }

  /// Checks a stage and, recursively, everything it was built from.
  StageMeta verify(const std::string& stage) const {
    std::ifstream in(meta_path(stage));
    if (!in) {
      throw DataError("missing " + describe(stage) + " in " + dir().string() + "; run `" +
                      rerun_command(stage) + "` first");
    }
    auto meta = StageMeta::read(in);
    if (meta.fingerprint.empty() || meta.fingerprint != meta.compute_fingerprint()) {
      throw DataError("corrupt metadata " + meta_path(stage).string() + "; run `" +
                      rerun_command(stage) + "` again");
    }
    const auto want = expected_params(stage);
    for (const auto& [k, v] : want) {
      auto it = std::find_if(meta.params.begin(), meta.params.end(),
                             [&](const auto& kv) { return kv.first == k; });
      const std::string had = it == meta.params.end() ? "<unset>" : it->second;
      if (had != v) {
        throw DataError("configuration fingerprint mismatch: " + describe(stage) +
                        " was built with " + k + "=" + had + " but the current value is '" + v +
                        "'; rerun `" + rerun_command(stage) + "` or restore the value");
      }
    }
    for (const auto& [dep, fp] : meta.deps) {
      if (verify(dep).fingerprint != fp) {
        throw DataError(describe(stage) + " is stale because " + describe(dep) +
                        " was rebuilt; rerun `" + rerun_command(stage) + "`");
      }
    }
    return meta;
  }

  /// Writes `<stage>.meta` for freshly written outputs.
  StageMeta record(const std::string& stage, KeyValues info,
                   const std::vector<std::string>& deps) const {
    StageMeta m;
    m.stage = stage;
    m.params = expected_params(stage);
    m.info = std::move(info);
    for (const auto& d : deps) m.deps.emplace_back(d, verify(d).fingerprint);
    m.fingerprint = m.compute_fingerprint();
    write_atomic(meta_path(stage), [&](std::ostream& o) { m.write(o); });
    return m;
  }

  void persist_config() const {
    write_atomic(resolved_config_path(), [&](std::ostream& o) { write_config(o, cfg_); });
  }

  Corpus load_split(const fs::path& p) const { return load_corpus(p).corpus; }

 private:
  std::pair<std::string, std::string> stopwords_hash() const {
    return {"stopwords_hash", cfg_.stopwords.empty() ? "builtin" : file_fingerprint(cfg_.stopwords)};
  }

  static std::string describe(const std::string& stage) {
    if (stage == "ingest") return "train/test split";
    if (stage == "prep") return "vocabulary";
    if (stage == "cluster") return "clustering";
    if (stage.rfind("profiles-", 0) == 0) return stage.substr(9) + " profiles";
    if (stage.rfind("index-", 0) == 0) return stage.substr(6) + " index";
    return stage;
  }

  static std::string rerun_command(const std::string& stage) {
    if (stage.rfind("profiles-", 0) == 0) return "venuerec profiles --strategy " + stage.substr(9);
    if (stage.rfind("index-", 0) == 0) return "venuerec index --strategy " + stage.substr(6);
    return "venuerec " + stage;
  }

  RunConfig cfg_;
};

// ---------------------------------------------------------------------------
// Stages

inline void stage_ingest(const Workspace& ws) {
  const auto& cfg = ws.config();
  if (cfg.corpus.empty()) throw UsageError("no corpus given (--corpus)");
  auto loaded = load_corpus(cfg.corpus);
  if (loaded.skipped) log_warning(std::to_string(loaded.skipped) + " malformed records skipped");
  const auto m_raw = loaded.corpus.size();
  auto corpus = exclude_venues(loaded.corpus,
                               std::set<std::string>(cfg.exclude_venues.begin(),
                                                     cfg.exclude_venues.end()));
  corpus = filter_venues(corpus, cfg.min_venue_articles);
  auto split = split_by_year(corpus, {cfg.train_through_year});
  write_atomic(ws.train_path(), [&](std::ostream& o) { write_corpus(o, split.train); });
  write_atomic(ws.test_path(), [&](std::ostream& o) { write_corpus(o, split.test); });
  log_info("ingest: " + std::to_string(m_raw) + " records, " + std::to_string(corpus.size()) +
           " kept in " + std::to_string(corpus.num_venues()) + " venues; train " +
           std::to_string(split.train.size()) + ", test " + std::to_string(split.test.size()) +
           " (" + std::to_string(split.unseen_venue_ids.size()) + " with unseen venue)");
  ws.record("ingest",
            {{"corpus_hash", file_fingerprint(cfg.corpus)},
             {"skipped", std::to_string(loaded.skipped)},
             {"venues", std::to_string(corpus.num_venues())},
             {"train", std::to_string(split.train.size())},
             {"test", std::to_string(split.test.size())},
             {"unseen_venue", std::to_string(split.unseen_venue_ids.size())}},
            {});
}

inline void stage_prep(const Workspace& ws) {
  ws.verify("ingest");
  const auto& pc = ws.config().pipeline;
  const auto train = ws.load_split(ws.train_path());
  const auto docs = clustering_tokens(train, ws.stopwords());
  const auto vocab = build_vocabulary(docs, pc.max_df, pc.min_df);
  write_atomic(ws.vocab_path(), [&](std::ostream& o) { vocab.save(o); });
  const auto m = vocab.num_docs(), t = vocab.size(), e = vocab.nonzeros();
  std::string ks = "can=" + std::to_string(heuristic_k(KMethod::kCan, m, t, e));
  if (t > 0 && e > 0) ks += " kaufman=" + std::to_string(heuristic_k(KMethod::kKaufman, m, t, e));
  log_info("prep: m=" + std::to_string(m) + " t=" + std::to_string(t) + " e=" +
           std::to_string(e) + "; K " + ks);
  ws.record("prep",
            {{"docs", std::to_string(m)}, {"terms", std::to_string(t)}, {"nonzeros", std::to_string(e)}},
            {"ingest"});
}

inline void stage_cluster(const Workspace& ws) {
  if (!fs::exists(ws.vocab_path()) || !fs::exists(ws.meta_path("prep"))) {
    throw DataError("missing vocabulary (" + ws.vocab_path().string() +
                    "); run `venuerec prep` first");
  }
  ws.verify("prep");
  const auto train = ws.load_split(ws.train_path());
  std::ifstream vin(ws.vocab_path());
  const auto vocab = Vocabulary::load(vin);
  if (vocab.empty()) throw DataError("vocabulary is empty; relax --min-df/--max-df and rerun prep");
  const auto result = cluster_corpus(train, vocab, ws.config().pipeline, ws.stopwords());
  write_atomic(ws.clustering_path(), [&](std::ostream& o) { result.save(o); });
  log_info("cluster: K=" + std::to_string(result.k) + " iterations=" +
           std::to_string(result.iterations) + " inertia=" + fmt_real(result.inertia));
  ws.record("cluster",
            {{"K", std::to_string(result.k)},
             {"iterations", std::to_string(result.iterations)},
             {"inertia", fmt_real(result.inertia)}},
            {"prep"});
}

inline ClusteringResult load_clustering(const Workspace& ws) {
  ws.verify("cluster");
  std::ifstream in(ws.clustering_path());
  if (!in) throw DataError("missing clustering file " + ws.clustering_path().string());
  return ClusteringResult::load(in);
}

inline void stage_profiles(const Workspace& ws) {
  ws.verify("ingest");
  std::optional<ClusteringResult> clustering;
  if (ws.needs_clustering()) clustering = load_clustering(ws);
  const auto analyzed = analyze(ws.load_split(ws.train_path()), ws.stopwords());
  for (auto s : ws.strategies()) {
    const auto profiles =
        build_profiles(analyzed, s, clustering ? &*clustering : nullptr);
    write_atomic(ws.profiles_path(s), [&](std::ostream& o) { write_profiles(o, profiles); });
    log_info("profiles: " + std::string(to_string(s)) + " " + std::to_string(profiles.size()) +
             " subprofiles");
    std::vector<std::string> deps{"ingest"};
    if (s == ProfileStrategy::kGroup) deps.push_back("cluster");
    ws.record(Workspace::profiles_stage(s), {{"subprofiles", std::to_string(profiles.size())}},
              deps);
  }
}

inline void stage_index(const Workspace& ws) {
  for (auto s : ws.strategies()) {
    const auto stage = Workspace::profiles_stage(s);
    ws.verify(stage);
    std::ifstream in(ws.profiles_path(s));
    if (!in) throw DataError("missing profiles file " + ws.profiles_path(s).string());
    const auto idx = FieldedIndex::build(read_profiles(in));
    write_atomic(ws.index_dir(s) / "index.bin", [&](std::ostream& o) { idx.save(o); });
    log_info("index: " + std::string(to_string(s)) + " " + std::to_string(idx.num_docs()) +
             " documents");
    ws.record(Workspace::index_stage(s), {{"docs", std::to_string(idx.num_docs())}}, {stage});
  }
}

inline FieldedIndex load_index(const Workspace& ws, ProfileStrategy s) {
  ws.verify(Workspace::index_stage(s));
  return FieldedIndex::load_dir(ws.index_dir(s));
}

/// Loads the indexes (and clustering size) the query-time settings need.
inline Model load_model(const Workspace& ws) {
  const auto& pc = ws.config().pipeline;
  Model model;
  model.stopwords = ws.stopwords();
  model.content_index = load_index(ws, pc.strategy);
  if (pc.needs_author_index()) model.author_index = load_index(ws, pc.author_strategy);
  const bool uses_gp = pc.strategy == ProfileStrategy::kGroup ||
                       (pc.needs_author_index() && pc.author_strategy == ProfileStrategy::kGroup);
  if (uses_gp) model.clustering = load_clustering(ws);
  return model;
}

/// One query for `recommend`: any of text, keywords and author ids.
struct QueryInput {
  std::string title_abstract;
  std::vector<std::string> keywords;
  std::vector<std::string> authors;

  /// Reads the first record of a line-delimited JSON stream. Only the text,
  /// keyword and author fields are used.
  static QueryInput from_record(std::istream& in, const CorpusSchema& schema = {}) {
    std::string line;
    while (std::getline(in, line)) {
      if (!detail::trim(line).empty()) break;
    }
    if (detail::trim(line).empty()) throw UsageError("no article record on input");
    QueryInput q;
    try {
      auto j = nlohmann::json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("record is not an object");
      if (auto it = j.find(schema.title_abstract); it != j.end() && it->is_string()) {
        q.title_abstract = it->get<std::string>();
      }
      q.keywords = detail::string_array(j, schema.keywords, false);
      q.authors = detail::string_array(j, schema.authors, true);
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad article record: ") + e.what());
    }
    return q;
  }
};

inline Query build_query(const QueryInput& in, const StopwordSet& stopwords) {
  Article a;
  a.title_abstract = in.title_abstract;
  a.keywords = in.keywords;
  for (const auto& au : in.authors) {
    auto t = detail::trim(au);
    if (!t.empty()) a.authors.push_back(std::move(t));
  }
  auto q = Query::from(analyze(a, stopwords));
  if (q.empty()) throw UsageError("the query has no indexable terms or authors");
  return q;
}

/// Prints `rank,venue_id,score,content,author` for the top venues.
inline void stage_recommend(const Workspace& ws, const QueryInput& input, std::ostream& out) {
  const auto& cfg = ws.config();
  const auto q = build_query(input, ws.stopwords());
  const auto model = load_model(ws);
  const auto r =
      rank_venues(q, model.content_index, model.index_for_authors(), cfg.pipeline);
  std::vector<BlendedScore> rows;
  switch (cfg.pipeline.features) {
    case Features::kCombined:
      rows = comb_linear_detailed(r.content, r.author, {cfg.pipeline.lambda_blend});
      break;
    case Features::kAuthor:
      for (const auto& v : r.author) rows.push_back({v.venue, v.score, 0.0, v.score});
      break;
    default:
      for (const auto& v : r.content) rows.push_back({v.venue, v.score, v.score, 0.0});
  }
  out << "rank,venue_id,score,content,author\n";
  for (std::size_t i = 0; i < rows.size() && i < cfg.top; ++i) {
    out << i + 1 << ',' << rows[i].venue << ',' << fmt_real(rows[i].score) << ','
        << fmt_real(rows[i].content) << ',' << fmt_real(rows[i].author) << '\n';
  }
}

/// Evaluates the test split, writes the CSV report and prints a summary.
inline std::vector<EvalReport> stage_evaluate(const Workspace& ws, std::ostream& out) {
  const auto& cfg = ws.config();
  ws.verify("ingest");
  const auto model = load_model(ws);
  const auto train = ws.load_split(ws.train_path());
  const auto test = ws.load_split(ws.test_path());
  std::vector<double> lambdas;
  if (!cfg.sweep_lambda.empty()) {
    lambdas = parse_sweep(cfg.sweep_lambda);
    if (cfg.pipeline.features != Features::kCombined) {
      log_warning("--sweep-lambda only applies to combined features; ignored");
    }
  }
  auto reports = evaluate_model(model, train, test, cfg.pipeline, lambdas);
  write_atomic(cfg.report_path(), [&](std::ostream& o) {
    o << EvalReport::csv_header() << '\n';
    for (const auto& r : reports) o << r.csv_row() << '\n';
  });
  for (const auto& r : reports) out << r.text();
  log_info("report written to " + cfg.report_path().string());
  return reports;
}

/// Summary statistics of a built index.
inline void stage_inspect(const Workspace& ws, std::ostream& out) {
  const auto s = ws.config().pipeline.strategy;
  const auto meta = ws.verify(Workspace::index_stage(s));
  const auto idx = FieldedIndex::load_dir(ws.index_dir(s));
  out << "strategy\t" << to_string(s) << '\n'
      << "fingerprint\t" << meta.fingerprint << '\n'
      << idx.stats();
}

}  // namespace venuerec
