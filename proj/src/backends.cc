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

#include "mwpc/backends.h"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "mwpc/errors.h"
#include "mwpc/jsonl.h"

namespace mwpc {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Shared limiter per endpoint so separate backend instances still respect the
// endpoint's rate.
std::shared_ptr<RateLimiter> limiter_for(const std::string& endpoint, double rps) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<RateLimiter>> limiters;
  std::lock_guard<std::mutex> lock(mu);
  std::string key = endpoint + "@" + std::to_string(rps);
  auto& slot = limiters[key];
  if (!slot) slot = std::make_shared<RateLimiter>(rps);
  return slot;
}

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

ParsedUrl parse_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must be a URL: " + url);
  std::size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl p;
  p.scheme_host_port = url.substr(0, path_start);
  p.path_prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!p.path_prefix.empty() && p.path_prefix.back() == '/') p.path_prefix.pop_back();
  return p;
}

}  // namespace

void ModelSpec::validate() const {
  if (name.empty()) throw ConfigError("model name must be non-empty");
  if (endpoint.empty()) throw ConfigError("model endpoint must be non-empty");
  if (!(params.timeout_s > 0)) throw ConfigError("timeout must be > 0");
  if (!(params.temperature >= 0)) throw ConfigError("temperature must be >= 0");
  if (params.max_tokens <= 0) throw ConfigError("max_tokens must be > 0");
  if (params.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (params.backoff_base_s < 0) throw ConfigError("backoff_base_s must be >= 0");
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model spec must be a JSON object");
  try {
    ModelSpec s;
    s.name = j.value("name", "");
    s.endpoint = j.value("endpoint", "");
    s.auth_env = j.value("auth_env", "");
    s.params.temperature = j.value("temperature", s.params.temperature);
    s.params.max_tokens = j.value("max_tokens", s.params.max_tokens);
    s.params.timeout_s = j.value("timeout_s", s.params.timeout_s);
    s.params.max_retries = j.value("max_retries", s.params.max_retries);
    s.params.backoff_base_s = j.value("backoff_base_s", s.params.backoff_base_s);
    s.params.rate_limit_rps = j.value("rate_limit_rps", s.params.rate_limit_rps);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid model spec: ") + e.what());
  }
}

nlohmann::ordered_json ModelSpec::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["endpoint"] = endpoint;
  j["auth_env"] = auth_env;
  j["temperature"] = params.temperature;
  j["max_tokens"] = params.max_tokens;
  j["timeout_s"] = params.timeout_s;
  j["max_retries"] = params.max_retries;
  j["backoff_base_s"] = params.backoff_base_s;
  j["rate_limit_rps"] = params.rate_limit_rps;
  return j;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::unordered_map<std::string, std::string> responses;
  for_each_json_line(path, [&](std::size_t line, const nlohmann::json& j) {
    auto where = path.string() + ":" + std::to_string(line);
    if (!j.is_object() || !j.contains("key") || !j["key"].is_string() ||
        !j.contains("response") || !j["response"].is_string())
      throw DataError(where + ": scripted fixture lines need string 'key' and 'response'");
    if (!responses.emplace(j["key"].get<std::string>(), j["response"].get<std::string>()).second)
      throw DataError(where + ": duplicate key " + j["key"].dump());
  });
  return std::make_unique<ScriptedBackend>(std::move(responses));
}

std::string ScriptedBackend::key_for(const RenderedPrompt& prompt) {
  return prompt.triplet_id + "|" + prompt.mode.tag();
}

CompletionResult ScriptedBackend::complete(const RenderedPrompt& prompt) {
  count_call();
  auto start = Clock::now();
  auto it = responses_.find(prompt.content_hash);
  if (it == responses_.end()) it = responses_.find(key_for(prompt));
  if (it == responses_.end())
    throw BackendError("lookup-miss: no scripted response for " + key_for(prompt) + " (" +
                           prompt.content_hash + ")",
                       1);
  return CompletionResult{it->second, elapsed_ms(start), 1, std::nullopt};
}

CompletionResult CallbackBackend::complete(const RenderedPrompt& prompt) {
  count_call();
  auto start = Clock::now();
  std::string text = fn_(prompt);
  return CompletionResult{std::move(text), elapsed_ms(start), 1, std::nullopt};
}

RateLimiter::RateLimiter(double rps) {
  if (rps > 0) {
    interval_ = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / rps));
  }
}

void RateLimiter::acquire() {
  if (interval_ == Clock::duration::zero()) return;
  std::lock_guard<std::mutex> lock(mu_);
  if (last_) {
    // Measured against the actual previous start, not its scheduled slot, so
    // a late wake-up can never compress the following gap.
    auto ready = *last_ + interval_;
    while (Clock::now() < ready) std::this_thread::sleep_until(ready);
  }
  last_ = Clock::now();
}

double backoff_delay_s(double base_s, int attempt, double unit_random) {
  return unit_random * base_s * std::ldexp(1.0, attempt - 1);
}

struct ChatCompletionsBackend::Impl {
  ParsedUrl url;
  std::shared_ptr<RateLimiter> limiter;
  std::mutex rng_mu;
  std::mt19937_64 rng{std::random_device{}()};

  double jitter() {
    std::lock_guard<std::mutex> lock(rng_mu);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
};

ChatCompletionsBackend::ChatCompletionsBackend(ModelSpec spec)
    : spec_(std::move(spec)), impl_(std::make_unique<Impl>()) {
  spec_.validate();
  if (!spec_.auth_env.empty()) {
    const char* key = std::getenv(spec_.auth_env.c_str());
    if (key == nullptr || *key == '\0')
      throw ConfigError("environment variable " + spec_.auth_env + " (model " + spec_.name +
                        ") is not set");
    api_key_ = key;
  }
  impl_->url = parse_url(spec_.endpoint);
  impl_->limiter = limiter_for(impl_->url.scheme_host_port + impl_->url.path_prefix,
                               spec_.params.rate_limit_rps);
}

ChatCompletionsBackend::~ChatCompletionsBackend() = default;

nlohmann::ordered_json ChatCompletionsBackend::request_body(const ModelSpec& spec,
                                                            std::string_view prompt) {
  nlohmann::ordered_json body;
  body["model"] = spec.name;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = spec.params.temperature;
  body["max_tokens"] = spec.params.max_tokens;
  return body;
}

CompletionResult ChatCompletionsBackend::complete(const RenderedPrompt& prompt) {
  count_call();
  if (prompt.text.empty()) throw BackendError("empty prompt", 0);
  const std::string body = request_body(spec_, prompt.text).dump();
  const std::string path = impl_->url.path_prefix + "/chat/completions";
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto timeout = std::chrono::duration<double>(spec_.params.timeout_s);
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  const int max_attempts = spec_.params.max_retries + 1;
  auto start = Clock::now();
  std::string last_cause;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      double delay = backoff_delay_s(spec_.params.backoff_base_s, attempt - 1, impl_->jitter());
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    impl_->limiter->acquire();
    httplib::Client client(impl_->url.scheme_host_port);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_cause = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_cause = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200),
                         attempt);
    }
    try {
      auto reply = nlohmann::json::parse(res->body);
      CompletionResult out;
      out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      out.attempts = attempt;
      out.latency_ms = elapsed_ms(start);
      if (auto u = reply.find("usage"); u != reply.end() && u->is_object()) {
        out.usage = TokenUsage{u->value("prompt_tokens", std::int64_t{0}),
                               u->value("completion_tokens", std::int64_t{0})};
      }
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("malformed completion response: ") + e.what(), attempt);
    }
  }
  throw BackendError("retries exhausted: " + last_cause, max_attempts);
}

std::unique_ptr<Backend> make_backend(const ModelSpec& spec) {
  spec.validate();
  if (spec.is_scripted()) return ScriptedBackend::from_file(spec.endpoint.substr(9));
  return std::make_unique<ChatCompletionsBackend>(spec);
}

}  // namespace mwpc
