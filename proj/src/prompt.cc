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

#include "rapm/prompt.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>

#include <json.hpp>

#include "rapm/error.h"

namespace rapm {
namespace {

// Must stay identical to data/prompt_template.txt.
constexpr std::string_view kDefaultTemplate =
    "{{query}}\n"
    "Protein sequence: {{sequence}}\n"
    "{{#few_shot}}\n"
    "\n"
    "Here are some examples of the expected answer format:\n"
    "\n"
    "{{few_shot}}\n"
    "{{/few_shot}}\n"
    "{{#retrieved_items}}\n"
    "\n"
    "Knowledge retrieved for similar proteins, as [Confidence, Annotation]:\n"
    "{{retrieved_items}}\n"
    "{{/retrieved_items}}\n";

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string format_item(const RetrievedItem& item) {
  return "[" + std::string(confidence_name(item.confidence)) + ", " +
         item.annotation + "]";
}

std::string format_few_shot(const FewShotExample& example) {
  return "Instruction: " + example.instruction + "\nSequence: " +
         example.sequence + "\nAnswer: " + example.answer;
}

std::string_view PromptTemplate::default_text() { return kDefaultTemplate; }

const PromptTemplate& PromptTemplate::default_template() {
  static const PromptTemplate tmpl = parse(kDefaultTemplate);
  return tmpl;
}

PromptTemplate PromptTemplate::parse(std::string_view text) {
  PromptTemplate tmpl;
  std::vector<Slot> open_blocks;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      tmpl.pieces_.push_back({Piece::Kind::kText, std::string(text.substr(pos))});
      break;
    }
    if (open > pos) {
      tmpl.pieces_.push_back(
          {Piece::Kind::kText, std::string(text.substr(pos, open - pos))});
    }
    size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kFormat, "unterminated placeholder in template");
    }
    std::string_view tag = text.substr(open + 2, close - open - 2);
    Piece::Kind kind = Piece::Kind::kSlot;
    std::string_view name = tag;
    if (!tag.empty() && (tag[0] == '#' || tag[0] == '/')) {
      kind = tag[0] == '#' ? Piece::Kind::kOpen : Piece::Kind::kClose;
      name = tag.substr(1);
    }
    Slot slot;
    if (name == "query") {
      slot = Slot::kQuery;
    } else if (name == "sequence") {
      slot = Slot::kSequence;
    } else if (name == "few_shot") {
      slot = Slot::kFewShot;
    } else if (name == "retrieved_items") {
      slot = Slot::kRetrievedItems;
    } else {
      throw Error(ErrorCode::kFormat,
                  "unresolved placeholder '{{" + std::string(tag) + "}}'");
    }
    if (kind == Piece::Kind::kOpen) open_blocks.push_back(slot);
    if (kind == Piece::Kind::kClose) {
      if (open_blocks.empty() || open_blocks.back() != slot) {
        throw Error(ErrorCode::kFormat,
                    "unbalanced block '{{" + std::string(tag) + "}}'");
      }
      open_blocks.pop_back();
    }
    tmpl.pieces_.push_back({kind, "", slot});
    pos = close + 2;
  }
  if (!open_blocks.empty()) {
    throw Error(ErrorCode::kFormat, "unclosed block in template");
  }

  // A block tag alone on its line removes the whole line. Decisions look at
  // the original text; deletions are applied afterwards, so adjacent tag
  // lines each see their own line intact.
  std::vector<Piece>& p = tmpl.pieces_;
  std::vector<std::vector<bool>> drop(p.size());
  for (size_t i = 0; i < p.size(); ++i) drop[i].assign(p[i].text.size(), false);
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].kind != Piece::Kind::kOpen && p[i].kind != Piece::Kind::kClose) continue;
    const std::string* before = (i > 0 && p[i - 1].kind == Piece::Kind::kText) ? &p[i - 1].text : nullptr;
    const std::string* after = (i + 1 < p.size() && p[i + 1].kind == Piece::Kind::kText) ? &p[i + 1].text : nullptr;
    // Preceding content on the same line must be blank.
    size_t line_start = 0;
    if (before) {
      size_t nl = before->rfind('\n');
      line_start = nl == std::string::npos ? 0 : nl + 1;
      if (nl == std::string::npos && i - 1 != 0) continue;
      bool blank = true;
      for (size_t j = line_start; j < before->size(); ++j) blank &= is_blank((*before)[j]);
      if (!blank) continue;
    } else if (i != 0) {
      continue;
    }
    size_t line_end = 0;
    if (after) {
      size_t j = 0;
      while (j < after->size() && is_blank((*after)[j])) ++j;
      if (j < after->size() && (*after)[j] != '\n') continue;
      line_end = j < after->size() ? j + 1 : j;
    } else if (i + 1 < p.size()) {
      continue;
    }
    if (before) std::fill(drop[i - 1].begin() + static_cast<std::ptrdiff_t>(line_start), drop[i - 1].end(), true);
    if (after) std::fill(drop[i + 1].begin(), drop[i + 1].begin() + static_cast<std::ptrdiff_t>(line_end), true);
  }
  for (size_t i = 0; i < p.size(); ++i) {
    std::string kept;
    for (size_t j = 0; j < p[i].text.size(); ++j) {
      if (!drop[i][j]) kept += p[i].text[j];
    }
    p[i].text = std::move(kept);
  }
  return tmpl;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open template " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse(text);
}

std::string PromptTemplate::render(const PromptQuery& query,
                                   std::span<const FewShotExample> few_shot,
                                   std::span<const RetrievedItem> items) const {
  std::vector<std::string> demos;
  for (const FewShotExample& e : few_shot) demos.push_back(format_few_shot(e));
  std::vector<std::string> lines;
  for (const RetrievedItem& item : items) lines.push_back(format_item(item));

  auto value = [&](Slot slot) -> std::string {
    switch (slot) {
      case Slot::kQuery: return query.instruction;
      case Slot::kSequence: return query.sequence;
      case Slot::kFewShot: return join(demos, "\n\n");
      case Slot::kRetrievedItems: return join(lines, "\n");
    }
    return {};
  };
  auto present = [&](Slot slot) {
    switch (slot) {
      case Slot::kQuery: return !query.instruction.empty();
      case Slot::kSequence: return !query.sequence.empty();
      case Slot::kFewShot: return !few_shot.empty();
      case Slot::kRetrievedItems: return !items.empty();
    }
    return false;
  };

  std::string out;
  int skip_depth = 0;
  for (const Piece& piece : pieces_) {
    switch (piece.kind) {
      case Piece::Kind::kOpen:
        if (skip_depth > 0 || !present(piece.slot)) ++skip_depth;
        break;
      case Piece::Kind::kClose:
        if (skip_depth > 0) --skip_depth;
        break;
      case Piece::Kind::kText:
        if (skip_depth == 0) out += piece.text;
        break;
      case Piece::Kind::kSlot:
        if (skip_depth == 0) out += value(piece.slot);
        break;
    }
  }
  return out;
}

PromptBundle build_prompt(const PromptQuery& query,
                          std::span<const FewShotExample> few_shot,
                          std::span<const RetrievedItem> items,
                          const PromptTemplate& tmpl) {
  PromptBundle bundle;
  bundle.query_text = query.instruction + "\n" + query.sequence;
  bundle.few_shot.assign(few_shot.begin(), few_shot.end());
  bundle.retrieved.assign(items.begin(), items.end());
  bundle.rendered = tmpl.render(query, few_shot, items);
  return bundle;
}

std::vector<FewShotExample> read_few_shot(std::istream& in) {
  std::vector<FewShotExample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    auto str = [&](const char* key) -> std::string {
      if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
        throw Error(ErrorCode::kFormat, "malformed few-shot example at line " +
                                            std::to_string(line_no) +
                                            ": missing string '" + key + "'");
      }
      return obj[key].get<std::string>();
    };
    FewShotExample e;
    e.instruction = str("instruction");
    e.sequence = str("sequence");
    e.answer = str("answer");
    if (obj.contains("task") && obj["task"].is_string()) {
      e.task = obj["task"].get<std::string>();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FewShotExample> read_few_shot_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open few-shot file " + path.string());
  return read_few_shot(in);
}

std::vector<FewShotExample> select_few_shot(std::span<const FewShotExample> all,
                                            const std::optional<std::string>& task,
                                            size_t per_task) {
  std::vector<FewShotExample> out;
  for (const FewShotExample& e : all) {
    if (out.size() == per_task) break;
    if (!e.task || e.task == task) out.push_back(e);
  }
  return out;
}

}  // namespace rapm
