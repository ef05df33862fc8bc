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

#include "rapm/rag.h"

#include <atomic>
#include <fstream>
#include <istream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rapm/error.h"

namespace rapm {
namespace {

std::string require_string(const nlohmann::json& obj, const char* key, size_t line_no) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw Error(ErrorCode::kFormat, std::string("missing string '") + key +
                                        "' at line " + std::to_string(line_no));
  }
  return obj[key].get<std::string>();
}

void write_jsonl(const std::filesystem::path& path, const std::vector<TextRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const TextRow& r : rows) {
    out << nlohmann::json{{"id", r.id}, {"text", r.text}, {"status", r.status}}.dump()
        << '\n';
  }
}

}  // namespace

std::string_view rag_mode_name(RagMode mode) {
  return mode == RagMode::kRag ? "rag" : "few-shot-only";
}

RagMode parse_rag_mode(std::string_view name) {
  if (name == "rag") return RagMode::kRag;
  if (name == "few-shot-only") return RagMode::kFewShotOnly;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "' (rag|few-shot-only)");
}

std::vector<RagSample> read_rag_dataset(std::istream& in) {
  std::vector<RagSample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (!obj.is_object()) {
      throw Error(ErrorCode::kFormat, "malformed JSON at line " + std::to_string(line_no));
    }
    RagSample s;
    s.id = require_string(obj, "id", line_no);
    s.instruction = require_string(obj, "instruction", line_no);
    s.sequence = normalize_sequence(require_string(obj, "sequence", line_no));
    s.reference = require_string(obj, "reference", line_no);
    if (obj.contains("task") && obj["task"].is_string()) s.task = obj["task"].get<std::string>();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RagSample> read_rag_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset " + path.string());
  return read_rag_dataset(in);
}

std::vector<ResponseLogEntry> read_response_log(const std::filesystem::path& path) {
  std::vector<ResponseLogEntry> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (!obj.is_object()) continue;
    try {
      ResponseLogEntry e;
      e.id = obj.at("id").get<std::string>();
      e.prompt_hash = obj.at("prompt_hash").get<std::string>();
      e.text = obj.at("text").get<std::string>();
      e.status = obj.at("status").get<std::string>();
      if (obj.contains("error")) e.error = obj["error"].get<std::string>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception&) {
      continue;
    }
  }
  return out;
}

PromptBundle render_sample(const RagSample& sample, RagMode mode,
                           const KnowledgeBase& kb, const FusionConfig& fusion,
                           const std::optional<std::vector<float>>& embedding,
                           std::span<const FewShotExample> few_shot_pool,
                           size_t few_shot_per_task, const PromptTemplate& tmpl) {
  std::vector<RetrievedItem> items;
  if (mode == RagMode::kRag) {
    items = retrieve_topk({sample.sequence, embedding, sample.task}, kb, fusion);
  }
  std::vector<FewShotExample> shots =
      select_few_shot(few_shot_pool, sample.task, few_shot_per_task);
  return build_prompt({sample.instruction, sample.sequence}, shots, items, tmpl);
}

RagRunResult run_rag_eval(const RagRunConfig& config, const KnowledgeBase& kb,
                          ChatClient& client, const EntityDictionary& dictionary) {
  if (config.max_parallel < 1) throw Error(ErrorCode::kConfig, "max_parallel must be >= 1");
  config.fusion.validate();
  std::vector<RagSample> samples = read_rag_dataset_file(config.dataset);
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");

  PromptTemplate tmpl = config.template_path.empty()
                            ? PromptTemplate::default_template()
                            : PromptTemplate::load(config.template_path);
  std::vector<FewShotExample> pool;
  if (!config.few_shot_path.empty()) pool = read_few_shot_file(config.few_shot_path);

  std::unordered_map<std::string, std::vector<float>> query_vectors;
  if (!config.query_embeddings.empty() && config.mode == RagMode::kRag) {
    EmbeddingFile file = read_embeddings_file(config.query_embeddings);
    for (EmbeddingEntry& e : file.entries) query_vectors[e.id] = std::move(e.vector);
  }

  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path log_path = config.output_dir / kResponseLogName;

  // id -> latest successful answer, with the prompt it answered.
  std::unordered_map<std::string, ResponseLogEntry> answered;
  for (ResponseLogEntry& e : read_response_log(log_path)) {
    if (e.status == "ok") answered[e.id] = std::move(e);
  }

  RagRunResult result;
  const size_t n = samples.size();
  std::vector<std::string> prompts(n);
  result.prompt_hashes.resize(n);
  result.predictions.resize(n);
  std::vector<size_t> pending;
  {
    std::unordered_map<std::string, size_t> seen;
    for (size_t i = 0; i < n; ++i) {
      const RagSample& s = samples[i];
      if (!seen.emplace(s.id, i).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate sample id '" + s.id + "'");
      }
      std::optional<std::vector<float>> emb;
      if (auto it = query_vectors.find(s.id); it != query_vectors.end()) emb = it->second;
      prompts[i] = render_sample(s, config.mode, kb, config.fusion, emb, pool,
                                 config.few_shot_per_task, tmpl)
                       .rendered;
      result.prompt_hashes[i] = sha256_hex(prompts[i]);
      result.predictions[i].id = s.id;
      auto hit = answered.find(s.id);
      if (hit != answered.end() && hit->second.prompt_hash == result.prompt_hashes[i]) {
        result.predictions[i].text = hit->second.text;
        ++result.reused;
      } else {
        pending.push_back(i);
      }
    }
  }

  // An interrupted run can leave a torn last line; start on a fresh one.
  bool torn = false;
  if (std::ifstream prev(log_path, std::ios::binary); prev && prev.seekg(0, std::ios::end).tellg() > 0) {
    prev.seekg(-1, std::ios::end);
    torn = prev.get() != '\n';
  }
  std::ofstream log(log_path, std::ios::app);
  if (!log) throw Error(ErrorCode::kIo, "cannot append to " + log_path.string());
  if (torn) log << '\n';
  std::mutex log_mu;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t slot = next++; slot < pending.size(); slot = next++) {
      const size_t i = pending[slot];
      ResponseLogEntry entry{samples[i].id, result.prompt_hashes[i], "", "ok", ""};
      try {
        entry.text = client.complete(prompts[i]);
      } catch (const std::exception& e) {
        entry.status = "failed";
        entry.error = e.what();
        spdlog::warn("sample {} failed: {}", entry.id, entry.error);
      }
      nlohmann::json line = {{"id", entry.id},
                             {"prompt_hash", entry.prompt_hash},
                             {"text", entry.text},
                             {"status", entry.status}};
      if (!entry.error.empty()) line["error"] = entry.error;
      std::lock_guard<std::mutex> lock(log_mu);
      log << line.dump() << '\n' << std::flush;
      result.predictions[i].text = entry.text;
      result.predictions[i].status = entry.status;
    }
  };
  const size_t workers = std::min(config.max_parallel, pending.size());
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  result.queried = pending.size();
  for (const TextRow& r : result.predictions) result.failed += r.status != "ok";

  write_jsonl(config.output_dir / kPredictionsName, result.predictions);

  std::vector<TextRow> references;
  for (const RagSample& s : samples) references.push_back({s.id, s.reference});
  result.report = evaluate_corpus(result.predictions, references, dictionary, config.eval);
  {
    std::ofstream out(config.output_dir / "report.txt", std::ios::trunc);
    write_report_text(out, result.report);
    std::ofstream jl(config.output_dir / "report.jsonl", std::ios::trunc);
    write_report_jsonl(jl, result.report);
  }
  return result;
}

}  // namespace rapm
