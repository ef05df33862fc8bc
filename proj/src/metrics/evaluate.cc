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

#include "rapm/metrics/evaluate.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "rapm/error.h"

namespace rapm {
namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void check_unique(std::span<const TextRow> rows, const char* what,
                  std::unordered_map<std::string, size_t>& index) {
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!index.emplace(rows[i].id, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("duplicate id '") + rows[i].id + "' in " + what);
    }
  }
}

}  // namespace

std::vector<TextRow> read_text_rows(std::istream& in) {
  std::vector<TextRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw Error(ErrorCode::kFormat,
                  "expected {id, text} at line " + std::to_string(line_no));
    }
    TextRow row{obj["id"].get<std::string>(), obj["text"].get<std::string>()};
    if (obj.contains("status") && obj["status"].is_string()) {
      row.status = obj["status"].get<std::string>();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TextRow> read_text_rows_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_text_rows(in);
}

SampleScores score_sample(const std::string& id, const std::string& prediction,
                          const std::string& reference,
                          const EntityDictionary& dictionary,
                          const EvalConfig& config) {
  SampleScores s;
  s.id = id;
  TokenSeq cand = tokenize(prediction);
  TokenSeq ref = tokenize(reference);
  BleuOptions b2{2, {}, config.smoothing};
  BleuOptions b4{4, {}, config.smoothing};
  s.bleu2 = bleu(cand, ref, b2).value;
  s.bleu4 = bleu(cand, ref, b4).value;
  s.rouge_l = rouge_l(cand, ref).f1;

  std::vector<std::string> ce = dictionary.extract_tokens(cand);
  TokenSeq re = dictionary.extract_tokens(ref);
  s.entity_empty = ce.empty();
  s.entity_bleu2 = bleu(ce, re, b2).value;
  s.entity_bleu4 = bleu(ce, re, b4).value;
  return s;
}

EvalReport evaluate_corpus(std::span<const TextRow> predictions,
                           std::span<const TextRow> references,
                           const EntityDictionary& dictionary,
                           const EvalConfig& config) {
  if (references.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  std::unordered_map<std::string, size_t> pred_index, ref_index;
  check_unique(predictions, "predictions", pred_index);
  check_unique(references, "references", ref_index);
  for (const TextRow& r : references) {
    if (!pred_index.count(r.id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "id mismatch: '" + r.id + "' has no prediction");
    }
  }
  for (const TextRow& p : predictions) {
    if (!ref_index.count(p.id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "id mismatch: '" + p.id + "' has no reference");
    }
  }

  EvalReport report;
  for (const TextRow& ref : references) {
    const TextRow& pred = predictions[pred_index.at(ref.id)];
    bool failed = pred.status != "ok";
    SampleScores s = score_sample(ref.id, failed ? std::string() : pred.text,
                                  ref.text, dictionary, config);
    s.failed = failed;
    report.entity_empty_count += s.entity_empty;
    report.failed_count += s.failed;
    report.means.bleu2 += s.bleu2;
    report.means.bleu4 += s.bleu4;
    report.means.rouge_l += s.rouge_l;
    report.means.entity_bleu2 += s.entity_bleu2;
    report.means.entity_bleu4 += s.entity_bleu4;
    report.samples.push_back(std::move(s));
  }
  const double n = static_cast<double>(report.samples.size());
  report.means.bleu2 /= n;
  report.means.bleu4 /= n;
  report.means.rouge_l /= n;
  report.means.entity_bleu2 /= n;
  report.means.entity_bleu4 /= n;
  return report;
}

void write_report_text(std::ostream& out, const EvalReport& report) {
  out << "id\tbleu2\tbleu4\trouge_l\tentity_bleu2\tentity_bleu4\tflags\n";
  for (const SampleScores& s : report.samples) {
    std::string flags;
    if (s.entity_empty) flags += "no-entities";
    if (s.failed) flags += flags.empty() ? "failed" : ",failed";
    if (flags.empty()) flags = "-";
    out << s.id << '\t' << fixed4(s.bleu2) << '\t' << fixed4(s.bleu4) << '\t'
        << fixed4(s.rouge_l) << '\t' << fixed4(s.entity_bleu2) << '\t'
        << fixed4(s.entity_bleu4) << '\t' << flags << '\n';
  }
  out << "\nsamples: " << report.samples.size() << '\n'
      << "bleu2: " << fixed4(report.means.bleu2) << '\n'
      << "bleu4: " << fixed4(report.means.bleu4) << '\n'
      << "rouge_l: " << fixed4(report.means.rouge_l) << '\n'
      << "entity_bleu2: " << fixed4(report.means.entity_bleu2) << '\n'
      << "entity_bleu4: " << fixed4(report.means.entity_bleu4) << '\n'
      << "no_entity_samples: " << report.entity_empty_count << '\n'
      << "failed_samples: " << report.failed_count << '\n';
}

void write_report_jsonl(std::ostream& out, const EvalReport& report) {
  for (const SampleScores& s : report.samples) {
    nlohmann::json j = {{"id", s.id},
                        {"bleu2", s.bleu2},
                        {"bleu4", s.bleu4},
                        {"rouge_l", s.rouge_l},
                        {"entity_bleu2", s.entity_bleu2},
                        {"entity_bleu4", s.entity_bleu4},
                        {"entity_empty", s.entity_empty},
                        {"failed", s.failed}};
    out << j.dump() << '\n';
  }
  nlohmann::json summary = {{"samples", report.samples.size()},
                            {"bleu2", report.means.bleu2},
                            {"bleu4", report.means.bleu4},
                            {"rouge_l", report.means.rouge_l},
                            {"entity_bleu2", report.means.entity_bleu2},
                            {"entity_bleu4", report.means.entity_bleu4},
                            {"no_entity_samples", report.entity_empty_count},
                            {"failed_samples", report.failed_count}};
  out << nlohmann::json{{"summary", summary}}.dump() << '\n';
}

}  // namespace rapm
