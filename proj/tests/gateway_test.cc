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

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rapm/error.h"
#include "rapm/gateway.h"
#include "rapm/knowledge_base.h"
#include "rapm/metrics/entity.h"
#include "rapm/rag.h"
#include "test_util.h"

namespace rapm {
namespace {

constexpr const char* kKeyVar = "RAPM_TEST_GATEWAY_KEY";

InferenceParams params_for(const testing::MockChatServer& server) {
  InferenceParams p;
  p.endpoint = server.endpoint();
  p.api_key_env = kKeyVar;
  p.backoff_seconds = 0.01;
  p.timeout_seconds = 10;
  return p;
}

class GatewayTest : public ::testing::Test {
 protected:
  void SetUp() override { setenv(kKeyVar, "sk-test-123", 1); }
  void TearDown() override { unsetenv(kKeyVar); }
  testing::MockChatServer server_;
};

TEST(ChatBodyTest, CarriesInferenceParams) {
  InferenceParams p;
  p.temperature = 0.2;
  nlohmann::json j = nlohmann::json::parse(chat_request_body("hello", p));
  EXPECT_EQ(j["model"], "gpt-4.1");
  EXPECT_EQ(j["temperature"], 0.2);
  EXPECT_EQ(j["top_p"], 0.9);
  EXPECT_EQ(j["max_tokens"], 2048);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "hello");
}

TEST(ChatBodyTest, ParsesResponses) {
  EXPECT_EQ(parse_chat_response(
                R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})"),
            "hi");
  EXPECT_THROW(parse_chat_response("not json"), Error);
  EXPECT_THROW(parse_chat_response(R"({"choices":[]})"), Error);
}

TEST(ChatBodyTest, ValidatesParams) {
  InferenceParams p;
  EXPECT_NO_THROW(p.validate());
  p.temperature = -1;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.max_parallel = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.max_attempts = 0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(ChatBodyTest, Sha256) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ChatBodyTest, ParsesEndpoint) {
  Endpoint e = parse_endpoint("http://127.0.0.1:9000/v1/chat/completions");
  EXPECT_EQ(e.scheme, "http");
  EXPECT_EQ(e.host, "127.0.0.1");
  EXPECT_EQ(e.port, 9000);
  EXPECT_EQ(e.path, "/v1/chat/completions");
  EXPECT_EQ(parse_endpoint("https://api.example.com/x").port, 443);
  EXPECT_THROW(parse_endpoint("ftp://x/y"), Error);
}

TEST_F(GatewayTest, EchoesPromptWithBearerToken) {
  HttpChatClient client(params_for(server_));
  EXPECT_EQ(client.complete("hello there"), "hello there");
  ASSERT_EQ(server_.auth_headers().size(), 1u);
  EXPECT_EQ(server_.auth_headers()[0], "Bearer sk-test-123");
}

TEST_F(GatewayTest, ServerErrorsExhaustRetries) {
  server_.set_fail_status(500);
  HttpChatClient client(params_for(server_));
  try {
    client.complete("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetwork);
    EXPECT_NE(std::string(e.what()).find("retries exhausted"), std::string::npos);
  }
  EXPECT_EQ(server_.requests(), 3);
}

TEST_F(GatewayTest, ClientErrorsAreNotRetried) {
  server_.set_fail_status(400);
  HttpChatClient client(params_for(server_));
  EXPECT_THROW(client.complete("x"), Error);
  EXPECT_EQ(server_.requests(), 1);
}

TEST_F(GatewayTest, MissingCredentialMakesNoRequest) {
  unsetenv(kKeyVar);
  try {
    HttpChatClient client(params_for(server_));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_EQ(server_.requests(), 0);
}

// --- Retrieval-augmented runs --------------------------------------------

KnowledgeBase tiny_kb() {
  KnowledgeStore store(4);
  store.add({"r1", "MKTLLVAGAVLAGLSQAHHHH", "ABC transporter domains", "domain",
             std::vector<float>{1, 0, 0, 0}});
  store.add({"r2", "MSTNPKPQRKTKRNTNRRPQDVKFPGG", "Heme binding", "function",
             std::vector<float>{0, 1, 0, 0}});
  store.add({"r3", "MGSSHHHHHHSSGLVPRGSHMASMTGG", "GGDEF domain", "domain",
             std::vector<float>{0, 0, 1, 0}});
  BuildOptions opts;
  opts.kmer_length = 3;
  return build_knowledge_base(std::move(store), opts);
}

std::string dataset_jsonl(size_t n) {
  std::string out;
  const char* seqs[] = {"MKTLLVAGAVLAGLSQAHHHA", "MSTNPKPQRKTKRNTNRRPQDVKFPGA",
                        "MGSSHHHHHHSSGLVPRGSHMASMTGA"};
  for (size_t i = 0; i < n; ++i) {
    nlohmann::json j = {{"id", "s" + std::to_string(100 + i)},
                        {"instruction", "Identify the domains present in this protein."},
                        {"sequence", seqs[i % 3]},
                        {"reference", "ABC transporter domains"},
                        {"task", "domain"}};
    out += j.dump() + "\n";
  }
  return out;
}

EntityDictionary dictionary() {
  return EntityDictionary::load(testing::data_dir() / "entities.txt",
                                testing::data_dir() / "stoplist.txt");
}

RagRunConfig run_config(const testing::ScratchDir& dir, size_t n) {
  testing::write_file(dir / "data.jsonl", dataset_jsonl(n));
  RagRunConfig c;
  c.dataset = dir / "data.jsonl";
  c.few_shot_path = testing::data_dir() / "few_shot.jsonl";
  c.output_dir = dir / "run";
  c.fusion.k = 3;
  return c;
}

TEST_F(GatewayTest, RagRunEchoesPromptsAndScoresThem) {
  testing::ScratchDir dir("rag");
  KnowledgeBase kb = tiny_kb();
  HttpChatClient client(params_for(server_));
  RagRunResult r = run_rag_eval(run_config(dir, 2), kb, client, dictionary());
  ASSERT_EQ(r.predictions.size(), 2u);
  EXPECT_EQ(r.queried, 2u);
  EXPECT_EQ(r.failed, 0u);
  EXPECT_NE(r.predictions[0].text.find("[High, ABC transporter domains]"), std::string::npos);
  EXPECT_NE(r.predictions[0].text.find("Answer: The protein contains PAS and GGDEF domains."),
            std::string::npos);
  // The echoed prompt mentions the reference entity, so entity BLEU is positive.
  EXPECT_GT(r.report.samples[0].entity_bleu2, 0.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "run" / "report.txt"));
  EXPECT_EQ(read_response_log(dir / "run" / "responses.jsonl").size(), 2u);
}

TEST_F(GatewayTest, FewShotOnlyHasNoRetrievedItems) {
  testing::ScratchDir dir("fewshot");
  KnowledgeBase kb = tiny_kb();
  HttpChatClient client(params_for(server_));
  RagRunConfig c = run_config(dir, 3);
  c.mode = RagMode::kFewShotOnly;
  RagRunResult r = run_rag_eval(c, kb, client, dictionary());
  for (const TextRow& row : r.predictions) {
    EXPECT_EQ(row.text.find("[High,"), std::string::npos);
    EXPECT_EQ(row.text.find("Knowledge retrieved"), std::string::npos);
    EXPECT_NE(row.text.find("Answer:"), std::string::npos);
  }
}

TEST_F(GatewayTest, ResumeSkipsAnsweredSamples) {
  testing::ScratchDir dir("resume");
  KnowledgeBase kb = tiny_kb();
  HttpChatClient client(params_for(server_));
  RagRunConfig c = run_config(dir, 6);
  RagRunResult first = run_rag_eval(c, kb, client, dictionary());
  EXPECT_EQ(server_.requests(), 6);

  // Keep two answers, then a torn line.
  std::ifstream in(dir / "run" / "responses.jsonl");
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  in.close();
  testing::write_file(dir / "run" / "responses.jsonl", l1 + "\n" + l2 + "\n{\"id\":\"s1");

  server_.reset_counters();
  RagRunResult second = run_rag_eval(c, kb, client, dictionary());
  EXPECT_EQ(server_.requests(), 4);
  EXPECT_EQ(second.reused, 2u);
  EXPECT_EQ(second.queried, 4u);
  ASSERT_EQ(second.predictions.size(), first.predictions.size());
  for (size_t i = 0; i < first.predictions.size(); ++i) {
    EXPECT_EQ(second.predictions[i].id, first.predictions[i].id);
    EXPECT_EQ(second.predictions[i].text, first.predictions[i].text);
  }

  // Fully answered now: nothing left to send.
  server_.reset_counters();
  RagRunResult third = run_rag_eval(c, kb, client, dictionary());
  EXPECT_EQ(server_.requests(), 0);
  EXPECT_EQ(third.reused, 6u);
}

TEST_F(GatewayTest, ChangedPromptIsResent) {
  testing::ScratchDir dir("changed");
  KnowledgeBase kb = tiny_kb();
  HttpChatClient client(params_for(server_));
  RagRunConfig c = run_config(dir, 2);
  run_rag_eval(c, kb, client, dictionary());
  server_.reset_counters();
  c.few_shot_per_task = 1;
  run_rag_eval(c, kb, client, dictionary());
  EXPECT_EQ(server_.requests(), 2);
}

TEST_F(GatewayTest, FailuresBecomeFailedRows) {
  testing::ScratchDir dir("failed");
  KnowledgeBase kb = tiny_kb();
  server_.set_fail_status(503);
  HttpChatClient client(params_for(server_));
  RagRunResult r = run_rag_eval(run_config(dir, 2), kb, client, dictionary());
  EXPECT_EQ(r.failed, 2u);
  EXPECT_EQ(r.report.failed_count, 2u);
  EXPECT_EQ(r.report.means.rouge_l, 0.0);
  // Failed answers are not reused.
  server_.set_fail_status(0);
  server_.reset_counters();
  RagRunResult again = run_rag_eval(run_config(dir, 2), kb, client, dictionary());
  EXPECT_EQ(server_.requests(), 2);
  EXPECT_EQ(again.failed, 0u);
}

TEST_F(GatewayTest, ConcurrencyIsBounded) {
  testing::ScratchDir dir("parallel");
  KnowledgeBase kb = tiny_kb();
  server_.set_delay_ms(30);
  HttpChatClient client(params_for(server_));
  RagRunConfig c = run_config(dir, 12);
  c.max_parallel = 3;
  run_rag_eval(c, kb, client, dictionary());
  EXPECT_LE(server_.peak_in_flight(), 3);
  EXPECT_GE(server_.peak_in_flight(), 2);
}

}  // namespace
}  // namespace rapm
