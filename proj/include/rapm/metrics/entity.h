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


// Dictionary-based bio-entity extraction and Entity-BLEU.

#ifndef RAPM_METRICS_ENTITY_H_
#define RAPM_METRICS_ENTITY_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rapm/metrics/text.h"

namespace rapm {

class EntityDictionary {
 public:
  // Entries and stoplist terms are tokenized like text and re-joined with
  // single spaces, so "ABC  Transporter," is stored as "abc transporter".
  // Stoplisted entries are dropped. Throws Error(kInvalidArgument) if nothing
  // remains.
  static EntityDictionary from_entries(std::span<const std::string> entries,
                                       std::span<const std::string> stoplist = {});
  // One entity per line; blank lines and lines starting with '#' are skipped.
  static EntityDictionary load(const std::filesystem::path& dictionary,
                               const std::filesystem::path& stoplist = {});

  bool contains(std::string_view entity) const { return entries_.count(std::string(entity)) != 0; }
  size_t size() const { return entries_.size(); }
  size_t max_words() const { return max_words_; }
  size_t stoplisted() const { return stoplisted_; }

  // Greedy longest match, left to right, non-overlapping. Duplicates kept.
  std::vector<std::string> extract(std::string_view text) const;
  std::vector<std::string> extract_tokens(std::span<const std::string> tokens) const;

 private:
  std::unordered_set<std::string> entries_;
  size_t max_words_ = 0;
  size_t stoplisted_ = 0;
};

inline constexpr size_t kDefaultEntityOrder = 2;

// BLEU over the extracted entity sequences, each entity one token. An empty
// candidate entity list scores 0 with empty_candidate set.
BleuScore entity_bleu(std::string_view candidate, std::string_view reference,
                      const EntityDictionary& dictionary,
                      size_t order = kDefaultEntityOrder,
                      Smoothing smoothing = Smoothing::kEpsilon);

}  // namespace rapm

#endif  // RAPM_METRICS_ENTITY_H_
