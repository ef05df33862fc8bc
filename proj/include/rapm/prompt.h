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

// Retrieval-augmented prompt construction: query, then few-shot
// demonstrations, then retrieved [Confidence, Annotation] items.
//
// Templates are plain text with four placeholders:
//   {{query}}            the task instruction
//   {{sequence}}         the query protein sequence
//   {{few_shot}}         rendered demonstrations, blank-line separated
//   {{retrieved_items}}  one "[<Confidence>, <Annotation>]" per line
// A block {{#name}} ... {{/name}} is emitted only when `name` is non-empty,
// so headers around an empty list disappear.

#ifndef RAPM_PROMPT_H_
#define RAPM_PROMPT_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rapm/retrieval.h"

namespace rapm {

struct FewShotExample {
  std::string instruction;
  std::string sequence;
  std::string answer;
  std::optional<std::string> task;

  bool operator==(const FewShotExample&) const = default;
};

struct PromptQuery {
  std::string instruction;
  std::string sequence;
};

struct PromptBundle {
  std::string query_text;
  std::vector<FewShotExample> few_shot;
  std::vector<RetrievedItem> retrieved;
  std::string rendered;
};

// "[High, ABC transporter domains]"
std::string format_item(const RetrievedItem& item);
std::string format_few_shot(const FewShotExample& example);

class PromptTemplate {
 public:
  // Throws Error(kFormat) on an unknown placeholder or unbalanced block.
  static PromptTemplate parse(std::string_view text);
  static PromptTemplate load(const std::filesystem::path& path);
  static const PromptTemplate& default_template();
  static std::string_view default_text();

  std::string render(const PromptQuery& query,
                     std::span<const FewShotExample> few_shot,
                     std::span<const RetrievedItem> items) const;

 private:
  enum class Slot { kQuery, kSequence, kFewShot, kRetrievedItems };
  struct Piece {
    enum class Kind { kText, kSlot, kOpen, kClose } kind;
    std::string text;
    Slot slot = Slot::kQuery;
  };

  std::vector<Piece> pieces_;
};

PromptBundle build_prompt(const PromptQuery& query,
                          std::span<const FewShotExample> few_shot,
                          std::span<const RetrievedItem> items,
                          const PromptTemplate& tmpl = PromptTemplate::default_template());

// Line-delimited {instruction, sequence, answer, task?}.
std::vector<FewShotExample> read_few_shot(std::istream& in);
std::vector<FewShotExample> read_few_shot_file(const std::filesystem::path& path);

// The first `per_task` demonstrations whose task equals `task`, in file order.
// Demonstrations without a task tag match any task.
std::vector<FewShotExample> select_few_shot(std::span<const FewShotExample> all,
                                            const std::optional<std::string>& task,
                                            size_t per_task = 2);

}  // namespace rapm

#endif  // RAPM_PROMPT_H_
