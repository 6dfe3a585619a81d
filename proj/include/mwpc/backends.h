// Copyright 2026 The MWPC Harness Authors.
// SPDX-License-Identifier: Apache-2.0
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

#ifndef MWPC_BACKENDS_H_
#define MWPC_BACKENDS_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"
#include "mwpc/prompting.h"

namespace mwpc {

struct BackendParams {
  double temperature = 0.0;
  int max_tokens = 1024;
  double timeout_s = 120.0;
  int max_retries = 5;
  double backoff_base_s = 1.0;
  // Requests per second per endpoint; <= 0 disables limiting.
  double rate_limit_rps = 2.0;
};

// Identity and transport settings of the model under test. `endpoint` is a
// base URL ("https://api.openai.com/v1") or "scripted:<fixture path>".
// `auth_env` names the environment variable holding the API key; the key
// itself is never stored.
struct ModelSpec {
  std::string name;
  std::string endpoint;
  std::string auth_env;
  BackendParams params;

  // Throws ConfigError.
  void validate() const;
  SamplingParams sampling() const { return {params.temperature, params.max_tokens}; }
  bool is_scripted() const { return endpoint.rfind("scripted:", 0) == 0; }

  static ModelSpec from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct CompletionResult {
  std::string text;
  double latency_ms = 0.0;
  int attempts = 1;
  std::optional<TokenUsage> usage;
};

// A model f(.) mapping a rendered prompt to text. Implementations are safe for
// concurrent use. Failures throw BackendError.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResult complete(const RenderedPrompt& prompt) = 0;
  // Number of complete() invocations so far.
  std::size_t calls() const { return calls_.load(); }

 protected:
  void count_call() { calls_.fetch_add(1); }

 private:
  std::atomic<std::size_t> calls_{0};
};

// Fixture lookup "model". Fixture lines are {"key": ..., "response": ...}
// where key is a prompt content_hash or "<triplet_id>|<mode tag>" (mode tags:
// reasoning, SP, DOP_NA, DOP_BE, DOP_SA). Unmapped prompts throw
// BackendError with a "lookup-miss" cause.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::unordered_map<std::string, std::string> responses)
      : responses_(std::move(responses)) {}

  // Throws DataError on a malformed fixture or duplicate key.
  static std::unique_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  static std::string key_for(const RenderedPrompt& prompt);
  CompletionResult complete(const RenderedPrompt& prompt) override;

 private:
  std::unordered_map<std::string, std::string> responses_;
};

// Backend computed by a function; used for constructed oracle models.
class CallbackBackend : public Backend {
 public:
  using Fn = std::function<std::string(const RenderedPrompt&)>;
  explicit CallbackBackend(Fn fn) : fn_(std::move(fn)) {}
  CompletionResult complete(const RenderedPrompt& prompt) override;

 private:
  Fn fn_;
};

// Spaces request starts at least 1/rps apart, so any one-second window holds
// at most ceil(rps) starts.
class RateLimiter {
 public:
  explicit RateLimiter(double rps);
  void acquire();

 private:
  std::chrono::steady_clock::duration interval_{};
  std::optional<std::chrono::steady_clock::time_point> last_;
  std::mutex mu_;
};

// Backoff before retry `attempt` (1-based): uniform in [0, base * 2^(attempt-1)].
double backoff_delay_s(double base_s, int attempt, double unit_random);

// OpenAI-compatible chat completions over HTTP(S):
//   POST {endpoint}/chat/completions
//   {"model", "messages": [{"role": "user", "content": prompt}], "temperature", "max_tokens"}
// The reply text is choices[0].message.content. HTTP 429, 5xx, connection
// failures and timeouts are retried with jittered exponential backoff; other
// statuses fail immediately.
class ChatCompletionsBackend : public Backend {
 public:
  // Throws ConfigError when the model spec is invalid or auth_env is set but the
  // variable is missing from the environment.
  explicit ChatCompletionsBackend(ModelSpec spec);
  ~ChatCompletionsBackend() override;

  CompletionResult complete(const RenderedPrompt& prompt) override;

  static nlohmann::ordered_json request_body(const ModelSpec& spec, std::string_view prompt);

 private:
  struct Impl;
  ModelSpec spec_;
  std::string api_key_;
  std::unique_ptr<Impl> impl_;
};

// Picks the scripted backend for "scripted:" endpoints and the HTTP backend
// otherwise.
std::unique_ptr<Backend> make_backend(const ModelSpec& spec);

}  // namespace mwpc

#endif  // MWPC_BACKENDS_H_
