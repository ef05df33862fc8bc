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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "rapm/gateway.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "rapm/error.h"

namespace rapm {

void InferenceParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, what); };
  if (!(temperature >= 0.0)) fail("temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail("top_p must lie in (0, 1]");
  if (max_tokens < 1) fail("max_tokens must be >= 1");
  if (max_parallel < 1) fail("max_parallel must be >= 1");
  if (max_attempts < 1) fail("max_attempts must be >= 1");
  if (!(timeout_seconds > 0.0)) fail("timeout must be positive");
  if (!(backoff_seconds >= 0.0)) fail("backoff must be >= 0");
  if (model.empty()) fail("model name is empty");
  if (api_key_env.empty()) fail("api key variable name is empty");
}

std::string chat_request_body(std::string_view prompt, const InferenceParams& params) {
  nlohmann::json body = {
      {"model", params.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_tokens},
      {"frequency_penalty", params.frequency_penalty},
      {"presence_penalty", params.presence_penalty},
  };
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  try {
    if (!j.is_discarded()) {
      const auto& content = j.at("choices").at(0).at("message").at("content");
      if (content.is_string()) return content.get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  throw Error(ErrorCode::kNetwork, "malformed chat-completion response body");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Endpoint parse_endpoint(std::string_view url) {
  Endpoint ep;
  size_t sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw Error(ErrorCode::kConfig, "endpoint needs a scheme: " + std::string(url));
  }
  ep.scheme = std::string(url.substr(0, sep));
  if (ep.scheme != "http" && ep.scheme != "https") {
    throw Error(ErrorCode::kConfig, "unsupported endpoint scheme '" + ep.scheme + "'");
  }
  std::string_view rest = url.substr(sep + 3);
  size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  ep.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    ep.host = std::string(authority.substr(0, colon));
    std::string port(authority.substr(colon + 1));
    char* end = nullptr;
    long p = std::strtol(port.c_str(), &end, 10);
    if (port.empty() || *end != '\0' || p <= 0 || p > 65535) {
      throw Error(ErrorCode::kConfig, "bad endpoint port '" + port + "'");
    }
    ep.port = static_cast<int>(p);
  } else {
    ep.host = std::string(authority);
    ep.port = ep.scheme == "https" ? 443 : 80;
  }
  if (ep.host.empty()) throw Error(ErrorCode::kConfig, "endpoint has no host");
  return ep;
}

HttpChatClient::HttpChatClient(InferenceParams params) : params_(std::move(params)) {
  params_.validate();
  endpoint_ = parse_endpoint(params_.endpoint);
  const char* key = std::getenv(params_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kConfig,
                "credential variable " + params_.api_key_env + " is not set");
  }
  api_key_ = key;
}

std::string HttpChatClient::complete(const std::string& prompt) {
  const std::string body = chat_request_body(prompt, params_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(params_.timeout_seconds));
  std::string last_error;
  for (int attempt = 1; attempt <= params_.max_attempts; ++attempt) {
    if (attempt > 1) {
      double wait = params_.backoff_seconds * std::pow(2.0, attempt - 2);
      std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
    // One connection per request: the client object is not shared between
    // threads.
    httplib::Client cli(endpoint_.scheme + "://" + endpoint_.host + ":" +
                        std::to_string(endpoint_.port));
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    cli.set_bearer_token_auth(api_key_);
    httplib::Result res = cli.Post(endpoint_.path, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      return parse_chat_response(res->body);
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw Error(ErrorCode::kNetwork, "HTTP " + std::to_string(res->status) +
                                           " from " + params_.endpoint);
    }
    spdlog::warn("chat request attempt {}/{} failed: {}", attempt,
                 params_.max_attempts, last_error);
  }
  throw Error(ErrorCode::kNetwork, "retries exhausted after " +
                                       std::to_string(params_.max_attempts) +
                                       " attempts: " + last_error);
}

}  // namespace rapm
