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

#include "rapm/seq_index.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "oracles.h"
#include "rapm/alignment.h"
#include "rapm/binary_io.h"
#include "rapm/error.h"
#include "rapm/knowledge_store.h"
#include "test_util.h"

namespace rapm {
namespace {

std::vector<std::string> sorted_kmers(const SeqIndex& index) { return index.kmers(); }

TEST(SeqIndexTest, SingleRecordPostingKeys) {
  std::vector<SeqEntry> entries = {{"P1", "ACDEFG"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  EXPECT_EQ(sorted_kmers(index), (std::vector<std::string>{"ACDEF", "CDEFG"}));
}

TEST(SeqIndexTest, IdenticalSequencesSharePostings) {
  std::vector<SeqEntry> entries = {{"B", "MKVLAAGW"}, {"A", "MKVLAAGW"}, {"C", "WWWWWW"}};
  SeqIndex index = SeqIndex::build(entries, 3);
  for (const std::string& kmer : index.kmers()) {
    std::span<const uint32_t> list = index.postings(kmer);
    bool has_a = false, has_b = false;
    for (uint32_t ord : list) {
      has_a |= index.ids()[ord] == "A";
      has_b |= index.ids()[ord] == "B";
    }
    EXPECT_EQ(has_a, has_b) << kmer;
    EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
    EXPECT_EQ(std::adjacent_find(list.begin(), list.end()), list.end());
  }
}

TEST(SeqIndexTest, EmptyStoreHasNoPostings) {
  SeqIndex index = SeqIndex::build(std::span<const SeqEntry>{}, 5);
  EXPECT_EQ(index.kmer_count(), 0u);
  EXPECT_TRUE(index.kmer_candidates("ACDEFG", 10).empty());
}

TEST(SeqIndexTest, ShortSequencesArePadded) {
  std::vector<SeqEntry> entries = {{"P1", "MKV"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  EXPECT_EQ(sorted_kmers(index), std::vector<std::string>{"MKV##"});
  ASSERT_EQ(index.kmer_candidates("MKV", 5).size(), 1u);
}

TEST(SeqIndexTest, KOutOfRange) {
  std::vector<SeqEntry> entries = {{"P1", "ACDEFG"}};
  EXPECT_THROW(SeqIndex::build(entries, 1), Error);
  EXPECT_THROW(SeqIndex::build(entries, 9), Error);
}

TEST(KmerCandidatesTest, SelfMatchComesFirst) {
  std::vector<SeqEntry> entries = {{"P1", "ACDEFG"}, {"P2", "WWWWWW"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  std::vector<KmerHit> hits = index.kmer_candidates("ACDEFG", 10);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0], (KmerHit{"P1", 2}));
}

TEST(KmerCandidatesTest, NoOverlapGivesNothing) {
  std::vector<SeqEntry> entries = {{"P1", "ACDEFG"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  EXPECT_TRUE(index.kmer_candidates("WWWWWWW", 10).empty());
}

TEST(KmerCandidatesTest, OrderedBySharedCount) {
  // Query shares ACDEF with A, and ACDEF + CDEFG with B.
  std::vector<SeqEntry> entries = {{"A", "ACDEFWWW"}, {"B", "ACDEFGWW"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  std::vector<KmerHit> hits = index.kmer_candidates("ACDEFG", 10);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0], (KmerHit{"B", 2}));
  EXPECT_EQ(hits[1], (KmerHit{"A", 1}));
}

TEST(KmerCandidatesTest, MatchesSubstringOracle) {
  Rng rng(3);
  std::vector<std::pair<std::string, std::string>> records;
  std::vector<SeqEntry> entries;
  for (int i = 0; i < 60; ++i) {
    std::string id = "R" + std::to_string(i);
    std::string seq = testing::random_protein(rng, 2 + rng.uniform_index(30), "ACDEG");
    records.push_back({id, seq});
    entries.push_back({id, seq});
  }
  for (int k = 2; k <= 8; ++k) {
    SeqIndex index = SeqIndex::build(entries, k);
    for (const std::string& kmer : index.kmers()) EXPECT_EQ(kmer.size(), static_cast<size_t>(k));
    for (int q = 0; q < 20; ++q) {
      std::string query = testing::random_protein(rng, 1 + rng.uniform_index(25), "ACDEG");
      auto expected = oracle::shared_kmer_ranking(records, query, k);
      std::vector<KmerHit> got = index.kmer_candidates(query, 1000);
      ASSERT_EQ(got.size(), expected.size()) << "k=" << k << " q=" << query;
      for (size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].id, expected[i].first);
        EXPECT_EQ(static_cast<int>(got[i].shared_kmers), expected[i].second);
      }
    }
  }
}

TEST(SeqSearchTest, StoredSequenceRanksFirst) {
  std::vector<SeqEntry> entries = {{"P1", "MKVLAAGIVG"}, {"P2", "MKVLAAGIWW"}, {"P3", "GGGGGGGGGG"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  std::vector<SeqHit> hits = index.search("MKVLAAGIVG", 3);
  ASSERT_GE(hits.size(), 2u);
  EXPECT_EQ(hits[0], (SeqHit{"P1", 1.0}));
  EXPECT_EQ(hits[1].id, "P2");
}

TEST(SeqSearchTest, NoCandidatesNoHits) {
  std::vector<SeqEntry> entries = {{"P1", "MKVLAAGIVG"}};
  SeqIndex index = SeqIndex::build(entries, 5);
  EXPECT_TRUE(index.search("WWWWWWWW", 3).empty());
  EXPECT_THROW(index.search("MKV", 0), Error);
}

TEST(SeqSearchTest, ToyStoreMatchesBruteForce) {
  std::vector<SeqEntry> entries = {{"A", "MKVLAAGIVGLL"}, {"B", "MKVLWAGIVGLA"}, {"C", "PKVLAAGQQQLL"}};
  SeqIndex index = SeqIndex::build(entries, 3);
  std::string query = "MKVLAAGIVGLA";
  std::vector<SeqHit> got = index.search(query, 3, 3);
  std::vector<SeqHit> expected;
  for (const SeqEntry& e : entries) {
    expected.push_back({e.id, oracle::needleman_wunsch(query, e.sequence).identity});
  }
  std::sort(expected.begin(), expected.end(), [](const SeqHit& x, const SeqHit& y) {
    return x.sim_seq != y.sim_seq ? x.sim_seq > y.sim_seq : x.id < y.id;
  });
  EXPECT_EQ(got, expected);
}

TEST(SeqSearchTest, PrefilterLimitCapsRescoring) {
  std::vector<SeqEntry> entries = {{"A", "ACDEFGHIK"}, {"B", "ACDEFWWWW"}, {"C", "ACDEWWWWW"}};
  SeqIndex index = SeqIndex::build(entries, 4);
  std::vector<SeqHit> hits = index.search("ACDEFGHIK", 10, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].id, "A");
}

TEST(SeqIndexTest, SerializeRoundTrip) {
  Rng rng(9);
  std::vector<SeqEntry> entries;
  for (int i = 0; i < 40; ++i) {
    entries.push_back({"S" + std::to_string(i), testing::random_protein(rng, 5 + rng.uniform_index(40))});
  }
  SeqIndex index = SeqIndex::build(entries, 4);
  ByteWriter w;
  index.serialize(w);
  ByteReader r(w.bytes());
  SeqIndex back = SeqIndex::deserialize(r);
  EXPECT_EQ(back.ids(), index.ids());
  EXPECT_EQ(back.kmers(), index.kmers());
  for (const std::string& kmer : index.kmers()) {
    std::span<const uint32_t> a = index.postings(kmer), b = back.postings(kmer);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  ByteWriter w2;
  back.serialize(w2);
  EXPECT_EQ(w2.bytes(), w.bytes());
}

TEST(SeqIndexTest, BuildFromStoreUsesStoredSequences) {
  KnowledgeStore store(2);
  store.add({"Q", "mkvlaa", "a", std::nullopt, std::nullopt});
  SeqIndex index = SeqIndex::build(store, 3);
  ASSERT_NE(index.find_sequence("Q"), nullptr);
  EXPECT_EQ(*index.find_sequence("Q"), "MKVLAA");
}

}  // namespace
}  // namespace rapm
