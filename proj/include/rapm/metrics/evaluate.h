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


// Corpus-level scoring of predictions against references.

#ifndef RAPM_METRICS_EVALUATE_H_
#define RAPM_METRICS_EVALUATE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rapm/metrics/entity.h"
#include "rapm/metrics/text.h"

namespace rapm {

// A line of a predictions or references file: {id, text[, status]}.
struct TextRow {
  std::string id;
  std::string text;
  // "ok" unless the producer marked the row as failed.
  std::string status = "ok";
};

std::vector<TextRow> read_text_rows(std::istream& in);
std::vector<TextRow> read_text_rows_file(const std::filesystem::path& path);

struct SampleScores {
  std::string id;
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double entity_bleu2 = 0.0;
  double entity_bleu4 = 0.0;
  // No entity extracted from the prediction.
  bool entity_empty = false;
  // The prediction row was not "ok"; it is scored as empty text.
  bool failed = false;
};

struct MetricMeans {
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double entity_bleu2 = 0.0;
  double entity_bleu4 = 0.0;
};

struct EvalConfig {
  Smoothing smoothing = Smoothing::kEpsilon;
};

struct EvalReport {
  std::vector<SampleScores> samples;
  MetricMeans means;
  size_t entity_empty_count = 0;
  size_t failed_count = 0;
};

SampleScores score_sample(const std::string& id, const std::string& prediction,
                          const std::string& reference,
                          const EntityDictionary& dictionary,
                          const EvalConfig& config = {});

// Samples come out in reference order. Throws Error(kInvalidArgument) when the
// id sets differ or repeat, and on an empty corpus.
EvalReport evaluate_corpus(std::span<const TextRow> predictions,
                           std::span<const TextRow> references,
                           const EntityDictionary& dictionary,
                           const EvalConfig& config = {});

// Per-sample table followed by a summary block.
void write_report_text(std::ostream& out, const EvalReport& report);
// One JSON object per sample, then one {"summary": ...} line.
void write_report_jsonl(std::ostream& out, const EvalReport& report);

}  // namespace rapm

#endif  // RAPM_METRICS_EVALUATE_H_
