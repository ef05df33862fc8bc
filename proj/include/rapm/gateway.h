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


// Chat-completion HTTP client.
//
// Request body: {"model", "messages": [{"role": "user", "content"}],
// "temperature", "top_p", "max_tokens", "frequency_penalty",
// "presence_penalty"}. The reply text is choices[0].message.content.

#ifndef RAPM_GATEWAY_H_
#define RAPM_GATEWAY_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace rapm {

struct InferenceParams {
  double temperature = 0.7;
  double top_p = 0.9;
  int max_tokens = 2048;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
  std::string model = "gpt-4.1";
  std::string endpoint = "http://127.0.0.1:8080/v1/chat/completions";
  double timeout_seconds = 120.0;
  size_t max_parallel = 4;
  // Name of the environment variable holding the bearer token. The token
  // itself never appears in configuration or logs.
  std::string api_key_env = "RAPM_API_KEY";
  int max_attempts = 3;
  // Sleep before retry i is backoff_seconds * 2^(i-1).
  double backoff_seconds = 0.5;

  // Throws Error(kConfig) on an out-of-range field.
  void validate() const;
};

// The JSON request body for one prompt.
std::string chat_request_body(std::string_view prompt, const InferenceParams& params);
// Extracts choices[0].message.content. Throws Error(kNetwork) on a malformed
// body.
std::string parse_chat_response(std::string_view body);

// Hex SHA-256.
std::string sha256_hex(std::string_view data);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Thread-safe. Throws Error on failure.
  virtual std::string complete(const std::string& prompt) = 0;
};

// Splits "http://host:port/path" into its parts. Throws Error(kConfig).
struct Endpoint {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;
};
Endpoint parse_endpoint(std::string_view url);

class HttpChatClient : public ChatClient {
 public:
  // Reads the credential variable; throws Error(kConfig) if it is unset, so
  // nothing reaches the network without one.
  explicit HttpChatClient(InferenceParams params);

  // Retries connection failures, timeouts, 429 and 5xx up to max_attempts
  // with exponential backoff. Other statuses fail at once.
  std::string complete(const std::string& prompt) override;

 private:
  InferenceParams params_;
  Endpoint endpoint_;
  std::string api_key_;
};

}  // namespace rapm

#endif  // RAPM_GATEWAY_H_
