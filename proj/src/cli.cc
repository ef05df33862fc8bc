// Copyright 2026 The RAPM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rapm/cli.h"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rapm/bench.h"
#include "rapm/error.h"
#include "rapm/gateway.h"
#include "rapm/knowledge_base.h"
#include "rapm/metrics/evaluate.h"
#include "rapm/rag.h"
#include "rapm/recall_bench.h"
#include "rapm/retrieval.h"

namespace rapm {
namespace {

using nlohmann::json;

struct CliConfig {
  std::string records, embeddings, snapshot, out, dictionary, stoplist;
  std::string template_path, few_shot, dataset, query_embeddings;
  std::string query, query_embedding, task, test_records, predictions, references;
  uint64_t seed = 42;
  int kmer = kDefaultKmerLength;
  HnswParams hnsw;
  FusionConfig fusion;
  Smoothing smoothing = Smoothing::kEpsilon;
  double threshold = kDefaultClusterThreshold;
  double test_fraction = kDefaultTestFraction;
  int rounds = kDefaultEliminationRounds;
  MatchRule match_rule = MatchRule::kNormalized;
  InferenceParams inference;
  RagMode mode = RagMode::kRag;
  size_t few_shot_per_task = 2;
  size_t count = 10000;
  size_t dim = 64;
  size_t queries = 1000;
};

enum class Kind { kString, kInt, kUint, kDouble };

struct Setting {
  const char* name;
  Kind kind;
  const char* help;
  std::function<void(CliConfig&, const json&)> apply;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::kConfig, msg);
}

std::string as_string(const json& v, const char* name) {
  if (!v.is_string()) config_error(std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}
double as_double(const json& v, const char* name) {
  if (!v.is_number()) config_error(std::string("'") + name + "' must be a number");
  return v.get<double>();
}
int64_t as_int(const json& v, const char* name) {
  if (!v.is_number_integer()) config_error(std::string("'") + name + "' must be an integer");
  return v.get<int64_t>();
}
uint64_t as_uint(const json& v, const char* name) {
  if (!v.is_number_integer() || v.get<int64_t>() < 0) {
    if (!v.is_number_unsigned()) {
      config_error(std::string("'") + name + "' must be a non-negative integer");
    }
  }
  return v.get<uint64_t>();
}


const std::vector<Setting>& settings() {
  static const std::vector<Setting> all = {
      {"records", Kind::kString, "protein records (JSONL {id, sequence, annotation, task})",
       [](CliConfig& c, const json& v) { c.records = as_string(v, "records"); }},
      {"embeddings", Kind::kString, "binary embedding file",
       [](CliConfig& c, const json& v) { c.embeddings = as_string(v, "embeddings"); }},
      {"snapshot", Kind::kString, "knowledge-base snapshot file",
       [](CliConfig& c, const json& v) { c.snapshot = as_string(v, "snapshot"); }},
      {"out", Kind::kString, "output path or directory",
       [](CliConfig& c, const json& v) { c.out = as_string(v, "out"); }},
      {"dictionary", Kind::kString, "bio-entity dictionary, one entity per line",
       [](CliConfig& c, const json& v) { c.dictionary = as_string(v, "dictionary"); }},
      {"stoplist", Kind::kString, "terms removed from the dictionary",
       [](CliConfig& c, const json& v) { c.stoplist = as_string(v, "stoplist"); }},
      {"template", Kind::kString, "prompt template file (default: built-in)",
       [](CliConfig& c, const json& v) { c.template_path = as_string(v, "template"); }},
      {"few-shot", Kind::kString, "few-shot demonstrations (JSONL)",
       [](CliConfig& c, const json& v) { c.few_shot = as_string(v, "few-shot"); }},
      {"few-shot-per-task", Kind::kUint, "demonstrations per prompt",
       [](CliConfig& c, const json& v) { c.few_shot_per_task = as_uint(v, "few-shot-per-task"); }},
      {"dataset", Kind::kString, "evaluation samples (JSONL {id, instruction, sequence, reference, task})",
       [](CliConfig& c, const json& v) { c.dataset = as_string(v, "dataset"); }},
      {"query-embeddings", Kind::kString, "embedding file keyed by sample id",
       [](CliConfig& c, const json& v) { c.query_embeddings = as_string(v, "query-embeddings"); }},
      {"query", Kind::kString, "query protein sequence",
       [](CliConfig& c, const json& v) { c.query = as_string(v, "query"); }},
      {"query-embedding", Kind::kString, "embedding file holding the query vector",
       [](CliConfig& c, const json& v) { c.query_embedding = as_string(v, "query-embedding"); }},
      {"task", Kind::kString, "task of the query (used by per-task pool scope)",
       [](CliConfig& c, const json& v) { c.task = as_string(v, "task"); }},
      {"test-records", Kind::kString, "test-side records (JSONL)",
       [](CliConfig& c, const json& v) { c.test_records = as_string(v, "test-records"); }},
      {"predictions", Kind::kString, "predictions (JSONL {id, text})",
       [](CliConfig& c, const json& v) { c.predictions = as_string(v, "predictions"); }},
      {"references", Kind::kString, "references (JSONL {id, text})",
       [](CliConfig& c, const json& v) { c.references = as_string(v, "references"); }},
      {"seed", Kind::kUint, "seed for every random choice",
       [](CliConfig& c, const json& v) { c.seed = as_uint(v, "seed"); }},
      {"kmer", Kind::kInt, "k-mer length (2-8)",
       [](CliConfig& c, const json& v) { c.kmer = static_cast<int>(as_int(v, "kmer")); }},
      {"hnsw-m", Kind::kUint, "HNSW links per node",
       [](CliConfig& c, const json& v) { c.hnsw.m = static_cast<uint32_t>(as_uint(v, "hnsw-m")); }},
      {"ef-construction", Kind::kUint, "HNSW build beam width",
       [](CliConfig& c, const json& v) {
         c.hnsw.ef_construction = static_cast<uint32_t>(as_uint(v, "ef-construction"));
       }},
      {"ef-search", Kind::kUint, "HNSW query beam width",
       [](CliConfig& c, const json& v) {
         c.hnsw.ef_search = static_cast<uint32_t>(as_uint(v, "ef-search"));
         c.fusion.ef_search = c.hnsw.ef_search;
       }},
      {"alpha", Kind::kDouble, "sequence weight in the fused score",
       [](CliConfig& c, const json& v) { c.fusion.alpha = as_double(v, "alpha"); }},
      {"k-support", Kind::kUint, "number of retrieved items K",
       [](CliConfig& c, const json& v) { c.fusion.k = as_uint(v, "k-support"); }},
      {"high-threshold", Kind::kDouble, "scores above this are High",
       [](CliConfig& c, const json& v) { c.fusion.high_threshold = as_double(v, "high-threshold"); }},
      {"low-threshold", Kind::kDouble, "scores at or below this are Low",
       [](CliConfig& c, const json& v) { c.fusion.low_threshold = as_double(v, "low-threshold"); }},
      {"pool-scope", Kind::kString, "retrieval pool: full-corpus or per-task",
       [](CliConfig& c, const json& v) { c.fusion.pool_scope = parse_pool_scope(as_string(v, "pool-scope")); }},
      {"candidate-limit", Kind::kUint, "candidates per channel before fusion",
       [](CliConfig& c, const json& v) { c.fusion.candidate_limit = as_uint(v, "candidate-limit"); }},
      {"prefilter", Kind::kUint, "k-mer candidates rescored by alignment",
       [](CliConfig& c, const json& v) { c.fusion.seq_prefilter_limit = as_uint(v, "prefilter"); }},
      {"smoothing", Kind::kString, "BLEU smoothing: epsilon or exact",
       [](CliConfig& c, const json& v) {
         std::string s = as_string(v, "smoothing");
         if (s == "epsilon") c.smoothing = Smoothing::kEpsilon;
         else if (s == "exact") c.smoothing = Smoothing::kExact;
         else config_error("smoothing must be 'epsilon' or 'exact'");
       }},
      {"threshold", Kind::kDouble, "clustering identity threshold",
       [](CliConfig& c, const json& v) { c.threshold = as_double(v, "threshold"); }},
      {"test-fraction", Kind::kDouble, "share of records placed in test",
       [](CliConfig& c, const json& v) { c.test_fraction = as_double(v, "test-fraction"); }},
      {"rounds", Kind::kInt, "leakage elimination rounds",
       [](CliConfig& c, const json& v) { c.rounds = static_cast<int>(as_int(v, "rounds")); }},
      {"match-rule", Kind::kString, "annotation match: normalized or exact",
       [](CliConfig& c, const json& v) { c.match_rule = parse_match_rule(as_string(v, "match-rule")); }},
      {"endpoint", Kind::kString, "chat-completion URL",
       [](CliConfig& c, const json& v) { c.inference.endpoint = as_string(v, "endpoint"); }},
      {"model", Kind::kString, "model name sent to the endpoint",
       [](CliConfig& c, const json& v) { c.inference.model = as_string(v, "model"); }},
      {"mode", Kind::kString, "rag or few-shot-only",
       [](CliConfig& c, const json& v) { c.mode = parse_rag_mode(as_string(v, "mode")); }},
      {"temperature", Kind::kDouble, "sampling temperature",
       [](CliConfig& c, const json& v) { c.inference.temperature = as_double(v, "temperature"); }},
      {"top-p", Kind::kDouble, "nucleus sampling mass",
       [](CliConfig& c, const json& v) { c.inference.top_p = as_double(v, "top-p"); }},
      {"max-tokens", Kind::kInt, "generation length cap",
       [](CliConfig& c, const json& v) { c.inference.max_tokens = static_cast<int>(as_int(v, "max-tokens")); }},
      {"frequency-penalty", Kind::kDouble, "frequency penalty",
       [](CliConfig& c, const json& v) { c.inference.frequency_penalty = as_double(v, "frequency-penalty"); }},
      {"presence-penalty", Kind::kDouble, "presence penalty",
       [](CliConfig& c, const json& v) { c.inference.presence_penalty = as_double(v, "presence-penalty"); }},
      {"max-parallel", Kind::kUint, "requests in flight at once",
       [](CliConfig& c, const json& v) { c.inference.max_parallel = as_uint(v, "max-parallel"); }},
      {"timeout", Kind::kDouble, "request timeout in seconds",
       [](CliConfig& c, const json& v) { c.inference.timeout_seconds = as_double(v, "timeout"); }},
      {"api-key-env", Kind::kString, "environment variable holding the API key",
       [](CliConfig& c, const json& v) { c.inference.api_key_env = as_string(v, "api-key-env"); }},
      {"count", Kind::kUint, "indexed vectors",
       [](CliConfig& c, const json& v) { c.count = as_uint(v, "count"); }},
      {"dim", Kind::kUint, "vector dimension",
       [](CliConfig& c, const json& v) { c.dim = as_uint(v, "dim"); }},
      {"queries", Kind::kUint, "query vectors",
       [](CliConfig& c, const json& v) { c.queries = as_uint(v, "queries"); }},
  };
  return all;
}

const Setting& setting(std::string_view name) {
  for (const Setting& s : settings()) {
    if (name == s.name) return s;
  }
  throw std::logic_error("no setting " + std::string(name));
}

json flag_to_json(const Setting& s, const std::string& text) {
  const std::string flag = std::string("--") + s.name;
  switch (s.kind) {
    case Kind::kString:
      return text;
    case Kind::kDouble: {
      char* end = nullptr;
      errno = 0;
      double v = std::strtod(text.c_str(), &end);
      if (text.empty() || *end != '\0' || errno != 0) config_error(flag + " expects a number");
      return v;
    }
    case Kind::kInt:
    case Kind::kUint: {
      char* end = nullptr;
      errno = 0;
      long long v = std::strtoll(text.c_str(), &end, 10);
      if (text.empty() || *end != '\0' || errno != 0) config_error(flag + " expects an integer");
      if (s.kind == Kind::kUint && v < 0) config_error(flag + " must be non-negative");
      return v;
    }
  }
  return nullptr;
}

// One subcommand: the settings it exposes as flags plus their parsed values.
struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::pair<const Setting*, std::optional<std::string>>> flags;
};

// CLI11 keeps pointers into the Command, so it must not move.
std::unique_ptr<Command> make_command(CLI::App& root, const char* name,
                                      const char* description,
                                      std::initializer_list<const char*> names) {
  auto cmd = std::make_unique<Command>();
  cmd->app = root.add_subcommand(name, description);
  cmd->app->add_option("--config", cmd->config_path, "JSON settings file; flags override it");
  cmd->flags.reserve(names.size());
  for (const char* n : names) cmd->flags.push_back({&setting(n), std::nullopt});
  for (auto& [s, value] : cmd->flags) {
    cmd->app->add_option(std::string("--") + s->name, value, s->help);
  }
  return cmd;
}

CliConfig resolve(const Command& cmd) {
  CliConfig cfg;
  if (!cmd.config_path.empty()) {
    std::ifstream in(cmd.config_path);
    if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + cmd.config_path);
    json file = json::parse(in, nullptr, false);
    if (!file.is_object()) config_error("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      bool known = false;
      for (const Setting& s : settings()) {
        if (key == s.name) {
          s.apply(cfg, value);
          known = true;
          break;
        }
      }
      if (!known) config_error("unknown config key '" + key + "'");
    }
  }
  for (const auto& [s, value] : cmd.flags) {
    if (value) s->apply(cfg, flag_to_json(*s, *value));
  }
  return cfg;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing required --") + flag);
  }
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string percent(double rate) { return fixed(100.0 * rate, 1) + "%"; }

// Runs `fn`, prefixing any failure with the pipeline stage.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

int cmd_build(const CliConfig& cfg, std::ostream& out) {
  require(cfg.records, "records");
  require(cfg.snapshot, "snapshot");
  uint32_t dim = kDefaultEmbeddingDim;
  if (!cfg.embeddings.empty()) {
    dim = stage("embeddings", [&] { return peek_embedding_dim(cfg.embeddings); });
  }
  KnowledgeStore store = stage("ingest", [&] { return ingest_records_file(cfg.records, dim); });
  if (!cfg.embeddings.empty()) {
    stage("embeddings", [&] { attach_embeddings_file(store, cfg.embeddings); });
  }
  BuildOptions opts;
  opts.kmer_length = cfg.kmer;
  opts.hnsw = cfg.hnsw;
  opts.hnsw.seed = cfg.seed;
  KnowledgeBase kb = stage("index", [&] { return build_knowledge_base(std::move(store), opts); });
  stage("save", [&] { save_snapshot(kb, cfg.snapshot); });
  out << "records: " << kb.store.size() << '\n'
      << "kmers: " << kb.seq_index.kmer_count() << '\n'
      << "hnsw_nodes: " << kb.emb_index.size() << '\n'
      << "meta_nodes: " << kb.emb_index.meta_count() << '\n'
      << "snapshot: " << cfg.snapshot << '\n';
  return kExitOk;
}

int cmd_retrieve(const CliConfig& cfg, std::ostream& out) {
  require(cfg.snapshot, "snapshot");
  require(cfg.query, "query");
  KnowledgeBase kb = stage("load", [&] { return load_snapshot(cfg.snapshot); });
  RetrievalQuery q;
  q.sequence = normalize_sequence(cfg.query);
  if (!cfg.task.empty()) q.task = cfg.task;
  if (!cfg.query_embedding.empty()) {
    EmbeddingFile f = read_embeddings_file(cfg.query_embedding);
    if (f.entries.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "--query-embedding must hold exactly one vector");
    }
    q.embedding = std::move(f.entries[0].vector);
  }
  std::vector<RetrievedItem> items = retrieve_topk(q, kb, cfg.fusion);
  out << "rank\tscore\tconfidence\tannotation\tprovenance\n";
  for (size_t i = 0; i < items.size(); ++i) {
    out << (i + 1) << '\t' << fixed(items[i].score, 4) << '\t'
        << confidence_name(items[i].confidence) << '\t' << items[i].annotation << '\t'
        << items[i].provenance << '\n';
  }
  return kExitOk;
}

void write_ids(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const std::string& id : ids) f << id << '\n';
}

int cmd_split_ood(const CliConfig& cfg, std::ostream& out) {
  require(cfg.records, "records");
  require(cfg.out, "out");
  KnowledgeStore store = stage("ingest", [&] { return ingest_records_file(cfg.records); });
  ClusterSet clusters = cluster_sequences(store.records(), cfg.threshold);
  SplitResult split = split_clusters(clusters, cfg.test_fraction, cfg.seed);
  EliminationOptions opts;
  opts.rounds = cfg.rounds;
  opts.audit.rule = cfg.match_rule;
  opts.audit.kmer_length = cfg.kmer;
  opts.audit.prefilter_limit = cfg.fusion.seq_prefilter_limit;
  split = eliminate_leakage(store, std::move(split), opts);

  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  write_ids(dir / "train_ids.txt", split.train_ids);
  write_ids(dir / "test_ids.txt", split.test_ids);
  json summary = {{"clusters", clusters.clusters.size()},
                  {"threshold", cfg.threshold},
                  {"test_fraction", cfg.test_fraction},
                  {"seed", cfg.seed},
                  {"match_rule", match_rule_name(cfg.match_rule)},
                  {"train", split.train_ids.size()},
                  {"test", split.test_ids.size()},
                  {"rounds_applied", split.rounds_applied},
                  {"leakage_per_round", split.leakage_per_round},
                  {"moved_per_round", split.moved_ids},
                  {"final_leakage", split.final_leakage},
                  {"converged", split.converged}};
  std::ofstream(dir / "summary.json", std::ios::trunc) << summary.dump(2) << '\n';
  out << "clusters: " << clusters.clusters.size() << '\n' << describe_split(split);
  return kExitOk;
}

int cmd_audit(const CliConfig& cfg, std::ostream& out) {
  require(cfg.records, "records");
  require(cfg.test_records, "test-records");
  KnowledgeStore train = stage("ingest", [&] { return ingest_records_file(cfg.records); });
  KnowledgeStore test = stage("ingest", [&] { return ingest_records_file(cfg.test_records); });
  AuditOptions opts;
  opts.rule = cfg.match_rule;
  opts.kmer_length = cfg.kmer;
  opts.prefilter_limit = cfg.fusion.seq_prefilter_limit;
  LeakageReport report = audit_leakage(train.records(), test.records(), opts);
  out << "leakage: " << percent(report.leakage_rate) << '\n'
      << "leaking: " << report.leaking_ids.size() << '/' << report.test_count << '\n'
      << "match_rule: " << match_rule_name(report.match_rule) << '\n';
  for (const std::string& id : report.leaking_ids) out << "  " << id << '\n';
  return kExitOk;
}

EntityDictionary load_dictionary(const CliConfig& cfg) {
  require(cfg.dictionary, "dictionary");
  return stage("dictionary", [&] { return EntityDictionary::load(cfg.dictionary, cfg.stoplist); });
}

void write_reports(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  std::ofstream txt(dir / "report.txt", std::ios::trunc);
  write_report_text(txt, report);
  std::ofstream jl(dir / "report.jsonl", std::ios::trunc);
  write_report_jsonl(jl, report);
}

void print_summary(std::ostream& out, const EvalReport& r) {
  out << "samples: " << r.samples.size() << '\n'
      << "bleu2: " << fixed(r.means.bleu2, 4) << '\n'
      << "bleu4: " << fixed(r.means.bleu4, 4) << '\n'
      << "rouge_l: " << fixed(r.means.rouge_l, 4) << '\n'
      << "entity_bleu2: " << fixed(r.means.entity_bleu2, 4) << '\n'
      << "entity_bleu4: " << fixed(r.means.entity_bleu4, 4) << '\n'
      << "no_entity_samples: " << r.entity_empty_count << '\n'
      << "failed_samples: " << r.failed_count << '\n';
}

int cmd_eval(const CliConfig& cfg, std::ostream& out) {
  require(cfg.predictions, "predictions");
  require(cfg.references, "references");
  EntityDictionary dict = load_dictionary(cfg);
  std::vector<TextRow> preds = read_text_rows_file(cfg.predictions);
  std::vector<TextRow> refs = read_text_rows_file(cfg.references);
  EvalReport report = evaluate_corpus(preds, refs, dict, {cfg.smoothing});
  if (!cfg.out.empty()) write_reports(cfg.out, report);
  print_summary(out, report);
  return kExitOk;
}

int cmd_rag_run(const CliConfig& cfg, std::ostream& out) {
  require(cfg.snapshot, "snapshot");
  require(cfg.dataset, "dataset");
  require(cfg.out, "out");
  EntityDictionary dict = load_dictionary(cfg);
  KnowledgeBase kb = stage("load", [&] { return load_snapshot(cfg.snapshot); });
  HttpChatClient client(cfg.inference);
  RagRunConfig run;
  run.dataset = cfg.dataset;
  run.query_embeddings = cfg.query_embeddings;
  run.template_path = cfg.template_path;
  run.few_shot_path = cfg.few_shot;
  run.output_dir = cfg.out;
  run.mode = cfg.mode;
  run.fusion = cfg.fusion;
  run.few_shot_per_task = cfg.few_shot_per_task;
  run.max_parallel = cfg.inference.max_parallel;
  run.eval.smoothing = cfg.smoothing;
  RagRunResult result = run_rag_eval(run, kb, client, dict);
  out << "mode: " << rag_mode_name(cfg.mode) << '\n'
      << "queried: " << result.queried << '\n'
      << "reused: " << result.reused << '\n';
  print_summary(out, result.report);
  out << "predictions: " << (std::filesystem::path(cfg.out) / kPredictionsName).string() << '\n';
  return kExitOk;
}

int cmd_bench_recall(const CliConfig& cfg, std::ostream& out) {
  RecallBenchOptions opts;
  opts.count = cfg.count;
  opts.dim = static_cast<uint32_t>(cfg.dim);
  opts.queries = cfg.queries;
  opts.k = cfg.fusion.k == FusionConfig{}.k ? 10 : cfg.fusion.k;
  opts.params = cfg.hnsw;
  opts.params.seed = cfg.seed;
  opts.seed = cfg.seed;
  RecallBenchResult r = measure_hnsw_recall(opts);
  out << "vectors: " << opts.count << " x " << opts.dim << '\n'
      << "recall@" << opts.k << ": " << fixed(r.recall, 4) << '\n'
      << "build_seconds: " << fixed(r.build_seconds, 3) << '\n'
      << "query_seconds: " << fixed(r.query_seconds, 3) << " (" << opts.queries << " queries)\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // Diagnostics belong on stderr; stdout carries results.
  if (!spdlog::get("rapm")) spdlog::set_default_logger(spdlog::stderr_color_mt("rapm"));
  CLI::App app{"Retrieval-augmented protein annotation toolkit", "rapm"};
  app.require_subcommand(1);

  std::vector<std::pair<std::unique_ptr<Command>, std::function<int(const CliConfig&, std::ostream&)>>> commands;
  commands.emplace_back(
      make_command(app, "build", "Ingest records and embeddings, build both indices, save a snapshot",
                   {"records", "embeddings", "snapshot", "seed", "kmer", "hnsw-m",
                    "ef-construction", "ef-search"}),
      cmd_build);
  commands.emplace_back(
      make_command(app, "retrieve", "Top-K fused retrieval for one query sequence",
                   {"snapshot", "query", "query-embedding", "task", "alpha", "k-support",
                    "ef-search", "high-threshold", "low-threshold", "pool-scope",
                    "candidate-limit", "prefilter"}),
      cmd_retrieve);
  commands.emplace_back(
      make_command(app, "split-ood", "Cluster, split and remove leakage; write id manifests",
                   {"records", "out", "seed", "threshold", "test-fraction", "rounds",
                    "match-rule", "kmer", "prefilter"}),
      cmd_split_ood);
  commands.emplace_back(
      make_command(app, "audit", "Top-1 label leakage of test records against train records",
                   {"records", "test-records", "match-rule", "kmer", "prefilter"}),
      cmd_audit);
  commands.emplace_back(
      make_command(app, "eval", "Score predictions against references",
                   {"predictions", "references", "dictionary", "stoplist", "smoothing", "out"}),
      cmd_eval);
  commands.emplace_back(
      make_command(app, "rag-run", "Batch generation through a chat-completion endpoint, then eval",
                   {"snapshot", "dataset", "query-embeddings", "template", "few-shot",
                    "few-shot-per-task", "dictionary", "stoplist", "smoothing", "endpoint",
                    "model", "mode", "out", "alpha", "k-support", "ef-search",
                    "high-threshold", "low-threshold", "pool-scope", "candidate-limit",
                    "prefilter", "temperature", "top-p", "max-tokens", "frequency-penalty",
                    "presence-penalty", "max-parallel", "timeout", "api-key-env"}),
      cmd_rag_run);
  commands.emplace_back(
      make_command(app, "bench-recall", "HNSW recall@k against exact search on Gaussian vectors",
                   {"seed", "count", "dim", "queries", "k-support", "hnsw-m",
                    "ef-construction", "ef-search"}),
      cmd_bench_recall);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    for (auto& [cmd, fn] : commands) {
      if (cmd->app->parsed()) return fn(resolve(*cmd), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_validation() ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace rapm
