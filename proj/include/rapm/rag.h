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


// Batch retrieval-augmented evaluation: retrieve, render, ask the model,
// log, score.

#ifndef RAPM_RAG_H_
#define RAPM_RAG_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rapm/gateway.h"
#include "rapm/knowledge_base.h"
#include "rapm/metrics/evaluate.h"
#include "rapm/prompt.h"
#include "rapm/retrieval.h"

namespace rapm {

// kFewShotOnly is the task-prompted baseline: no retrieval at all.
enum class RagMode { kRag, kFewShotOnly };
std::string_view rag_mode_name(RagMode mode);
RagMode parse_rag_mode(std::string_view name);

struct RagSample {
  std::string id;
  std::string instruction;
  std::string sequence;
  std::string reference;
  std::optional<std::string> task;
};

// Line-delimited {id, instruction, sequence, reference, task?}.
std::vector<RagSample> read_rag_dataset(std::istream& in);
std::vector<RagSample> read_rag_dataset_file(const std::filesystem::path& path);

struct RagRunConfig {
  std::filesystem::path dataset;
  // Optional query vectors keyed by sample id.
  std::filesystem::path query_embeddings;
  std::filesystem::path template_path;
  std::filesystem::path few_shot_path;
  // Receives responses.jsonl, predictions.jsonl, report.txt, report.jsonl.
  std::filesystem::path output_dir;
  RagMode mode = RagMode::kRag;
  FusionConfig fusion;
  size_t few_shot_per_task = 2;
  size_t max_parallel = 4;
  EvalConfig eval;
};

struct ResponseLogEntry {
  std::string id;
  std::string prompt_hash;
  std::string text;
  // "ok" or "failed".
  std::string status;
  std::string error;
};

// Unparsable lines (a write cut short by a kill) are skipped.
std::vector<ResponseLogEntry> read_response_log(const std::filesystem::path& path);

struct RagRunResult {
  std::vector<TextRow> predictions;
  std::vector<std::string> prompt_hashes;
  EvalReport report;
  size_t queried = 0;
  size_t reused = 0;
  size_t failed = 0;
};

inline constexpr std::string_view kResponseLogName = "responses.jsonl";
inline constexpr std::string_view kPredictionsName = "predictions.jsonl";

// Renders every prompt up front, reuses logged answers whose prompt hash still
// matches, sends the rest through a pool of at most max_parallel workers and
// writes predictions in dataset order. A failed request becomes a failed row
// rather than aborting the batch.
RagRunResult run_rag_eval(const RagRunConfig& config, const KnowledgeBase& kb,
                          ChatClient& client, const EntityDictionary& dictionary);

// The prompt run_rag_eval would send for one sample.
PromptBundle render_sample(const RagSample& sample, RagMode mode,
                           const KnowledgeBase& kb, const FusionConfig& fusion,
                           const std::optional<std::vector<float>>& embedding,
                           std::span<const FewShotExample> few_shot_pool,
                           size_t few_shot_per_task, const PromptTemplate& tmpl);

}  // namespace rapm

#endif  // RAPM_RAG_H_
