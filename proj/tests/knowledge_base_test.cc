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

#include "rapm/knowledge_base.h"

#include <gtest/gtest.h>

#include "rapm/error.h"
#include "rapm/retrieval.h"
#include "test_util.h"

namespace rapm {
namespace {

using V = std::vector<float>;

KnowledgeStore small_store() {
  KnowledgeStore store(4);
  store.add({"P1", "MKVLAAGIVG", "lysozyme", "function", V{1, 0, 0, 0}});
  store.add({"P2", "MKVLAAGIWG", "lysozyme", "function", V{1, 0, 0, 0}});
  store.add({"P3", "WWPPGGHHKL", "kinase", "domain", V{0, 1, 0, 0}});
  return store;
}

TEST(AggregateTest, IdenticalMembers) {
  AggregationResult r = aggregate_features(small_store());
  ASSERT_EQ(r.features.size(), 1u);
  EXPECT_EQ(r.features[0].annotation, "lysozyme");
  EXPECT_EQ(r.features[0].vector, (V{1, 0, 0, 0}));
  EXPECT_EQ(r.features[0].member_count, 2u);
}

TEST(AggregateTest, MeanOfTwo) {
  KnowledgeStore store(2);
  store.add({"A", "MKV", "x", std::nullopt, V{1, 0}});
  store.add({"B", "MKV", "x", std::nullopt, V{0, 1}});
  AggregationResult r = aggregate_features(store);
  ASSERT_EQ(r.features.size(), 1u);
  EXPECT_EQ(r.features[0].vector, (V{0.5f, 0.5f}));
}

TEST(AggregateTest, SingletonsAndIncompleteGroupsAreSkipped) {
  KnowledgeStore store(2);
  store.add({"A", "MKV", "single", std::nullopt, V{1, 0}});
  store.add({"B", "MKV", "pair", std::nullopt, V{1, 0}});
  store.add({"C", "MKV", "pair", std::nullopt, std::nullopt});
  AggregationResult r = aggregate_features(store);
  EXPECT_TRUE(r.features.empty());
  EXPECT_EQ(r.skipped, std::vector<std::string>{"pair"});
}

TEST(AggregateTest, MeanMatchesOracleWithinTolerance) {
  Rng rng(8);
  KnowledgeStore store(16);
  std::vector<V> members;
  for (int i = 0; i < 7; ++i) {
    members.push_back(testing::random_vector(rng, 16));
    store.add({"R" + std::to_string(i), "MKV", "group", std::nullopt, members.back()});
  }
  AggregationResult r = aggregate_features(store);
  ASSERT_EQ(r.features.size(), 1u);
  for (size_t d = 0; d < 16; ++d) {
    long double sum = 0;
    for (const V& m : members) sum += m[d];
    EXPECT_NEAR(r.features[0].vector[d], static_cast<double>(sum / 7), 1e-6);
  }
}

TEST(KnowledgeBaseTest, BuildCountsNodes) {
  KnowledgeBase kb = build_knowledge_base(small_store(), {});
  EXPECT_TRUE(kb.store.sealed());
  EXPECT_EQ(kb.seq_index.size(), 3u);
  EXPECT_EQ(kb.emb_index.size(), 4u);
  EXPECT_EQ(kb.emb_index.meta_count(), 1u);
  EXPECT_TRUE(kb.emb_index.find("lysozyme", true).has_value());
}

TEST(SnapshotTest, RoundTripPreservesRecordsAndTopK) {
  testing::ScratchDir dir("snap");
  KnowledgeBase kb = build_knowledge_base(small_store(), {});
  save_snapshot(kb, dir / "kb.snap");
  KnowledgeBase back = load_snapshot(dir / "kb.snap");
  EXPECT_EQ(back.store, kb.store);
  RetrievalQuery q{"MKVLAAGIVG", V{1, 0.1f, 0, 0}, std::nullopt};
  FusionConfig cfg;
  cfg.k = 3;
  EXPECT_EQ(retrieve_topk(q, back, cfg), retrieve_topk(q, kb, cfg));
  EXPECT_EQ(serialize_snapshot(back), serialize_snapshot(kb));
}

TEST(SnapshotTest, RebuildIsByteIdentical) {
  EXPECT_EQ(serialize_snapshot(build_knowledge_base(small_store(), {})),
            serialize_snapshot(build_knowledge_base(small_store(), {})));
}

TEST(SnapshotTest, WrongMagicIsFormatError) {
  std::string bytes = serialize_snapshot(build_knowledge_base(small_store(), {}));
  bytes[0] = 'X';
  try {
    parse_snapshot(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }
}

TEST(SnapshotTest, VersionAndChecksumAreChecked) {
  std::string good = serialize_snapshot(build_knowledge_base(small_store(), {}));
  std::string bumped = good;
  bumped[kSnapshotMagic.size()] = static_cast<char>(kSnapshotVersion + 1);
  try {
    parse_snapshot(bumped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVersionMismatch);
  }
  std::string flipped = good;
  flipped[good.size() / 2] ^= 0x20;
  try {
    parse_snapshot(flipped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::kChecksum || e.code() == ErrorCode::kFormat)
        << error_code_name(e.code());
  }
  EXPECT_THROW(parse_snapshot(good.substr(0, good.size() - 2)), Error);
}

TEST(SnapshotTest, QueryWithWrongDimensionAfterLoad) {
  testing::ScratchDir dir("snapdim");
  save_snapshot(build_knowledge_base(small_store(), {}), dir / "kb.snap");
  KnowledgeBase kb = load_snapshot(dir / "kb.snap");
  RetrievalQuery q{"MKV", V(8, 1.f), std::nullopt};
  try {
    retrieve_topk(q, kb, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

}  // namespace
}  // namespace rapm
