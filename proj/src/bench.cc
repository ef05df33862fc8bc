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

#include "rapm/bench.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rapm/alignment.h"
#include "rapm/error.h"
#include "rapm/rng.h"

namespace rapm {
namespace {

std::vector<ProteinRecord> gather(const KnowledgeStore& store,
                                  std::span<const std::string> ids) {
  std::vector<ProteinRecord> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    const ProteinRecord* r = store.find(id);
    if (!r) throw Error(ErrorCode::kNotFound, "unknown id '" + id + "'");
    out.push_back(*r);
  }
  return out;
}

double rate(size_t leaks, size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(leaks) / static_cast<double>(total);
}

}  // namespace

size_t ClusterSet::member_count() const {
  size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

ClusterSet cluster_sequences(std::span<const ProteinRecord> records,
                             double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cluster threshold must lie in [0, 1]");
  }
  std::vector<const ProteinRecord*> order;
  for (const ProteinRecord& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const ProteinRecord* a, const ProteinRecord* b) {
    if (a->sequence.size() != b->sequence.size()) return a->sequence.size() > b->sequence.size();
    return a->id < b->id;
  });

  ClusterSet set;
  set.threshold = threshold;
  std::vector<const std::string*> reps;
  for (const ProteinRecord* r : order) {
    bool placed = false;
    for (size_t c = 0; c < reps.size(); ++c) {
      if (align_identity(r->sequence, *reps[c]).identity >= threshold) {
        set.clusters[c].push_back(r->id);
        placed = true;
        break;
      }
    }
    if (!placed) {
      set.clusters.push_back({r->id});
      reps.push_back(&r->sequence);
    }
  }
  return set;
}

SplitResult split_clusters(const ClusterSet& clusters, double test_fraction,
                           uint64_t seed) {
  if (clusters.clusters.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least 2 clusters to split; raise the cluster threshold");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test fraction must lie in (0, 1)");
  }
  std::vector<size_t> order(clusters.clusters.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const double target = test_fraction * static_cast<double>(clusters.member_count());
  SplitResult split;
  size_t in_test = 0;
  // A cluster bigger than the whole train share would leave train starved.
  const double oversize = static_cast<double>(clusters.member_count()) - target;
  for (size_t c : order) {
    const auto& members = clusters.clusters[c];
    const bool to_test = static_cast<double>(in_test) < target - 1e-9 &&
                         static_cast<double>(members.size()) <= oversize + 1e-9;
    auto& side = to_test ? split.test_ids : split.train_ids;
    side.insert(side.end(), members.begin(), members.end());
    if (&side == &split.test_ids) in_test += members.size();
  }
  if (split.train_ids.empty()) {
    throw Error(ErrorCode::kFailedPrecondition,
                "split left the training side empty; lower the test fraction "
                "or change the cluster threshold");
  }
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

std::string_view match_rule_name(MatchRule rule) {
  return rule == MatchRule::kExact ? "exact" : "normalized";
}

MatchRule parse_match_rule(std::string_view name) {
  if (name == "exact") return MatchRule::kExact;
  if (name == "normalized") return MatchRule::kNormalized;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown match rule '" + std::string(name) + "' (exact|normalized)");
}

std::string normalize_annotation(std::string_view annotation) {
  std::string out;
  bool pending_space = false;
  for (char c : annotation) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool annotations_match(std::string_view a, std::string_view b, MatchRule rule) {
  if (rule == MatchRule::kExact) return a == b;
  return normalize_annotation(a) == normalize_annotation(b);
}

LeakageReport audit_leakage(std::span<const ProteinRecord> train,
                            std::span<const ProteinRecord> test,
                            const AuditOptions& options) {
  if (test.empty()) throw Error(ErrorCode::kInvalidArgument, "empty test set");
  std::vector<SeqEntry> entries;
  entries.reserve(train.size());
  std::unordered_map<std::string, const std::string*> annotation_of;
  for (const ProteinRecord& r : train) {
    entries.push_back({r.id, r.sequence});
    annotation_of[r.id] = &r.annotation;
  }
  SeqIndex index = SeqIndex::build(entries, options.kmer_length);

  LeakageReport report;
  report.match_rule = options.rule;
  report.test_count = test.size();
  for (const ProteinRecord& r : test) {
    std::vector<SeqHit> top = index.search(r.sequence, 1, options.prefilter_limit);
    if (top.empty()) continue;
    if (annotations_match(r.annotation, *annotation_of.at(top[0].id), options.rule)) {
      report.leaking_ids.push_back(r.id);
    }
  }
  report.leakage_rate = rate(report.leaking_ids.size(), test.size());
  return report;
}

LeakageReport audit_leakage(const KnowledgeStore& store,
                            std::span<const std::string> train_ids,
                            std::span<const std::string> test_ids,
                            const AuditOptions& options) {
  std::vector<ProteinRecord> train = gather(store, train_ids);
  std::vector<ProteinRecord> test = gather(store, test_ids);
  return audit_leakage(train, test, options);
}

SplitResult eliminate_leakage(const KnowledgeStore& store, SplitResult split,
                              const EliminationOptions& options) {
  if (options.rounds < 1) throw Error(ErrorCode::kInvalidArgument, "rounds must be >= 1");
  const int cap = options.until_clean ? std::max(options.rounds, options.round_cap)
                                      : options.rounds;
  split.moved_ids.clear();
  split.leakage_per_round.clear();
  split.rounds_applied = 0;

  for (int round = 0; round < cap; ++round) {
    LeakageReport audit = audit_leakage(store, split.train_ids, split.test_ids, options.audit);
    split.leakage_per_round.push_back(audit.leakage_rate);
    if (audit.leaking_ids.empty()) break;
    if (audit.leaking_ids.size() == split.test_ids.size()) {
      throw Error(ErrorCode::kFailedPrecondition,
                  "leakage elimination would empty the test set; raise the "
                  "cluster threshold");
    }
    std::unordered_set<std::string> moving(audit.leaking_ids.begin(), audit.leaking_ids.end());
    std::erase_if(split.test_ids, [&](const std::string& id) { return moving.count(id) != 0; });
    split.train_ids.insert(split.train_ids.end(), audit.leaking_ids.begin(), audit.leaking_ids.end());
    std::sort(split.train_ids.begin(), split.train_ids.end());
    split.moved_ids.push_back(std::move(audit.leaking_ids));
    ++split.rounds_applied;
  }

  LeakageReport last = audit_leakage(store, split.train_ids, split.test_ids, options.audit);
  split.final_leakage = last.leakage_rate;
  split.converged = last.leaking_ids.empty();
  return split;
}

std::string describe_split(const SplitResult& split) {
  std::ostringstream out;
  char buf[32];
  out << "train: " << split.train_ids.size() << "\ntest: " << split.test_ids.size()
      << "\nrounds_applied: " << split.rounds_applied << '\n';
  for (size_t i = 0; i < split.leakage_per_round.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * split.leakage_per_round[i]);
    size_t moved = i < split.moved_ids.size() ? split.moved_ids[i].size() : 0;
    out << "round " << (i + 1) << ": leakage " << buf << ", moved " << moved << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * split.final_leakage);
  out << "final_leakage: " << buf << '\n';
  return out.str();
}

}  // namespace rapm
