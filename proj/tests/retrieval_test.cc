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

#include "rapm/retrieval.h"

#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "rapm/alignment.h"
#include "rapm/error.h"
#include "rapm/knowledge_base.h"
#include "rapm/vector_sim.h"
#include "test_util.h"

namespace rapm {
namespace {

using V = std::vector<float>;

TEST(FuseScoresTest, Examples) {
  EXPECT_DOUBLE_EQ(fuse_scores(0.8, 0.6, 0.5), 0.7);
  EXPECT_DOUBLE_EQ(fuse_scores(0.42, 0.9, 1.0), 0.42);
  EXPECT_DOUBLE_EQ(fuse_scores(0.1, 0.33, 0.0), 0.33);
  EXPECT_THROW(fuse_scores(1.2, 0.5, 0.5), Error);
  EXPECT_THROW(fuse_scores(0.5, -0.1, 0.5), Error);
  EXPECT_THROW(fuse_scores(0.5, 0.5, 1.5), Error);
}

TEST(QuantizeTest, StrictUpperAndInclusiveLowerBoundary) {
  FusionConfig cfg;
  EXPECT_EQ(quantize_confidence(0.95, cfg), Confidence::kHigh);
  EXPECT_EQ(quantize_confidence(0.90, cfg), Confidence::kMedium);
  EXPECT_EQ(quantize_confidence(0.75, cfg), Confidence::kMedium);
  EXPECT_EQ(quantize_confidence(0.60, cfg), Confidence::kLow);
  EXPECT_EQ(quantize_confidence(0.0, cfg), Confidence::kLow);
}

TEST(FusionConfigTest, Validation) {
  FusionConfig cfg;
  cfg.alpha = 1.01;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.low_threshold = 0.95;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_pool_scope("per-task"), PoolScope::kPerTask);
  EXPECT_THROW(parse_pool_scope("global"), Error);
}

KnowledgeBase toy_kb() {
  KnowledgeStore store(4);
  store.add({"R1", "MKVLAAGIVGLL", "lysozyme", "function", V{1, 0.2f, 0, 0}});
  store.add({"R2", "MKVLAWGIVGLA", "lysozyme", "function", V{0.9f, 0.1f, 0.1f, 0}});
  store.add({"R3", "PPGGHHKLMNWW", "kinase", "domain", V{0, 1, 0, 0.3f}});
  store.add({"R4", "MKVLAAGIPPPP", "abc transporter", "domain", V{0.2f, 0, 1, 0}});
  store.add({"R5", "QQQQEEEERRRR", "ggdef", "function", V{0, 0, 0.1f, 1}});
  return build_knowledge_base(std::move(store), {});
}

TEST(RetrieveTest, IdenticalQueryScoresOne) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 1;
  std::vector<RetrievedItem> items =
      retrieve_topk({"MKVLAAGIVGLL", V{1, 0.2f, 0, 0}, std::nullopt}, kb, cfg);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].annotation, "lysozyme");
  EXPECT_EQ(items[0].provenance, "R1");
  EXPECT_DOUBLE_EQ(items[0].score, 1.0);
  EXPECT_EQ(items[0].confidence, Confidence::kHigh);
}

TEST(RetrieveTest, DuplicateAnnotationKeepsBestScore) {
  KnowledgeStore store(4);
  store.add({"X1", "ACDEFGHIWW", "same", std::nullopt, std::nullopt});
  store.add({"X2", "ACDEFGHWWW", "same", std::nullopt, std::nullopt});
  store.add({"Y", "ACDEFGWWWW", "other", std::nullopt, std::nullopt});
  KnowledgeBase kb = build_knowledge_base(std::move(store), {});
  FusionConfig cfg;
  cfg.k = 2;
  std::vector<RetrievedItem> items = retrieve_topk({"ACDEFGHIKL", std::nullopt, std::nullopt}, kb, cfg);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].annotation, "same");
  EXPECT_EQ(items[0].provenance, "X1");
  EXPECT_DOUBLE_EQ(items[0].score, 0.8);
  EXPECT_EQ(items[1].annotation, "other");
  EXPECT_DOUBLE_EQ(items[1].score, 0.6);
  EXPECT_EQ(items[1].confidence, Confidence::kLow);
}

std::vector<oracle::FusedItem> oracle_for(const KnowledgeBase& kb, const RetrievalQuery& q,
                                          double alpha, size_t k) {
  return oracle::exhaustive_fusion(
      kb.store, q.sequence, q.embedding, alpha, k,
      [](std::string_view a, std::string_view b) { return oracle::needleman_wunsch(a, b).identity; },
      [](const V& a, const V& b) { return sim_emb(a, b); });
}

void expect_same(const std::vector<RetrievedItem>& got,
                 const std::vector<oracle::FusedItem>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].annotation, want[i].annotation) << i;
    EXPECT_EQ(got[i].provenance, want[i].provenance) << i;
    EXPECT_EQ(got[i].score, want[i].score) << i;
  }
}

TEST(RetrieveTest, ToyStoreEqualsExhaustiveOracle) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 3;
  cfg.alpha = 0.5;
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    RetrievalQuery q{testing::random_protein(rng, 6 + rng.uniform_index(10), "MKVLAGIPQ"),
                     testing::random_vector(rng, 4), std::nullopt};
    expect_same(retrieve_topk(q, kb, cfg), oracle_for(kb, q, 0.5, 3));
  }
}

TEST(RetrieveTest, MetaNodeCarriesZeroSequencePart) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 5;
  cfg.alpha = 0.0;
  // The query is the lysozyme group mean, so the meta node is the best match.
  V mean = {0.95f, 0.15f, 0.05f, 0.0f};
  std::vector<RetrievedItem> items = retrieve_topk({"WWWW", mean, std::nullopt}, kb, cfg);
  ASSERT_FALSE(items.empty());
  EXPECT_EQ(items[0].provenance, meta_provenance("lysozyme"));
  EXPECT_EQ(items[0].sim_seq_part, 0.0);
  EXPECT_NEAR(items[0].score, 1.0, 1e-9);
  std::set<std::string> annotations;
  for (const RetrievedItem& it : items) annotations.insert(it.annotation);
  EXPECT_EQ(annotations.size(), items.size());
}

TEST(RetrieveTest, WithoutQueryEmbeddingRanksBySequence) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 2;
  std::vector<RetrievedItem> items = retrieve_topk({"MKVLAAGIVGLL", std::nullopt, std::nullopt}, kb, cfg);
  ASSERT_FALSE(items.empty());
  EXPECT_EQ(items[0].provenance, "R1");
  EXPECT_DOUBLE_EQ(items[0].score, 1.0);
  for (const RetrievedItem& it : items) EXPECT_EQ(it.score, it.sim_seq_part);
}

TEST(RetrieveTest, PrefixUnderSmallerK) {
  KnowledgeBase kb = toy_kb();
  Rng rng(22);
  for (int i = 0; i < 30; ++i) {
    RetrievalQuery q{testing::random_protein(rng, 10, "MKVLAGIPQ"), testing::random_vector(rng, 4), std::nullopt};
    FusionConfig big;
    big.k = 4;
    std::vector<RetrievedItem> all = retrieve_topk(q, kb, big);
    for (size_t k = 1; k < 4; ++k) {
      FusionConfig small;
      small.k = k;
      std::vector<RetrievedItem> part = retrieve_topk(q, kb, small);
      ASSERT_LE(part.size(), all.size());
      EXPECT_TRUE(std::equal(part.begin(), part.end(), all.begin()));
    }
  }
}

TEST(RetrieveTest, PerTaskScopeOnlyReturnsMatchingTask) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 5;
  cfg.pool_scope = PoolScope::kPerTask;
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    RetrievalQuery q{testing::random_protein(rng, 10, "MKVLAGIPQ"), testing::random_vector(rng, 4), "domain"};
    for (const RetrievedItem& it : retrieve_topk(q, kb, cfg)) {
      ASSERT_FALSE(it.provenance.starts_with(kMetaProvenancePrefix)) << it.provenance;
      EXPECT_EQ(kb.store.find(it.provenance)->task, "domain");
    }
  }
}

TEST(RetrieveTest, ConfidenceFromSequenceSimilarity) {
  KnowledgeBase kb = toy_kb();
  FusionConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.0;
  cfg.confidence_source = ConfidenceSource::kSequenceSimilarity;
  std::vector<RetrievedItem> items = retrieve_topk({"MKVLAAGIVGLL", V{0, 0, 0, 1}, std::nullopt}, kb, cfg);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].confidence, quantize_confidence(items[0].sim_seq_part, cfg));
}

TEST(RetrieveTest, EmptyStoreGivesNothing) {
  KnowledgeBase kb = build_knowledge_base(KnowledgeStore(4), {});
  EXPECT_TRUE(retrieve_topk({"MKV", V{1, 0, 0, 0}, std::nullopt}, kb, {}).empty());
}

}  // namespace
}  // namespace rapm
