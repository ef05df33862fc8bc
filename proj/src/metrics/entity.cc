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

#include "rapm/metrics/entity.h"

#include <algorithm>
#include <fstream>

#include "rapm/error.h"

namespace rapm {
namespace {

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path,
                                    const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot open ") + what + " " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

EntityDictionary EntityDictionary::from_entries(std::span<const std::string> entries,
                                                std::span<const std::string> stoplist) {
  std::unordered_set<std::string> stop;
  for (const std::string& s : stoplist) {
    TokenSeq t = tokenize(s);
    if (!t.empty()) stop.insert(join_tokens(t));
  }
  EntityDictionary dict;
  for (const std::string& e : entries) {
    TokenSeq t = tokenize(e);
    if (t.empty()) continue;
    std::string key = join_tokens(t);
    if (stop.count(key)) {
      ++dict.stoplisted_;
      continue;
    }
    dict.max_words_ = std::max(dict.max_words_, t.size());
    dict.entries_.insert(std::move(key));
  }
  if (dict.entries_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "entity dictionary is empty");
  }
  return dict;
}

EntityDictionary EntityDictionary::load(const std::filesystem::path& dictionary,
                                        const std::filesystem::path& stoplist) {
  std::vector<std::string> entries = read_lines(dictionary, "dictionary");
  std::vector<std::string> stop;
  if (!stoplist.empty()) stop = read_lines(stoplist, "stoplist");
  return from_entries(entries, stop);
}

std::vector<std::string> EntityDictionary::extract_tokens(
    std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t longest = std::min(max_words_, tokens.size() - i);
    size_t matched = 0;
    for (size_t len = longest; len >= 1; --len) {
      std::string cand = join_tokens(tokens.subspan(i, len));
      if (entries_.count(cand)) {
        out.push_back(std::move(cand));
        matched = len;
        break;
      }
    }
    i += matched > 0 ? matched : 1;
  }
  return out;
}

std::vector<std::string> EntityDictionary::extract(std::string_view text) const {
  return extract_tokens(tokenize(text));
}

BleuScore entity_bleu(std::string_view candidate, std::string_view reference,
                      const EntityDictionary& dictionary, size_t order,
                      Smoothing smoothing) {
  std::vector<std::string> cand = dictionary.extract(candidate);
  TokenSeq ref = dictionary.extract(reference);
  BleuOptions opts;
  opts.max_order = order;
  opts.smoothing = smoothing;
  BleuScore s = bleu(cand, std::span<const TokenSeq>(&ref, 1), opts);
  s.empty_candidate = cand.empty();
  return s;
}

}  // namespace rapm
