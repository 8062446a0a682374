// Copyright 2026 The PromptScope Authors
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
#ifndef PROMPTSCOPE_LLM_BACKEND_HPP_
#define PROMPTSCOPE_LLM_BACKEND_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/llm/prompt.hpp"

namespace promptscope::llm {

// Keys of CompletionRequest::tags understood by the mock backend.
namespace tag {
inline constexpr std::string_view kTask = "task";  // summarize | recommend | suggest | score
inline constexpr std::string_view kPersona = "persona";
inline constexpr std::string_view kConstraints = "constraints";
inline constexpr std::string_view kArticle = "article";
inline constexpr std::string_view kBlock = "block";
}  // namespace tag

struct CompletionRequest {
  std::string model;
  double temperature = 0.0;
  std::vector<Message> messages;
  bool json_mode = false;
  // Local metadata. Never sent on the wire and not part of the hash.
  std::map<std::string, std::string, std::less<>> tags;

  // Throws Error(INVALID_REQUEST) on empty messages or temperature outside
  // [0, 2].
  void validate() const;
  // Chat-completions request body.
  nlohmann::json wire() const;
  // SHA-256 of the serialized wire body.
  std::string hash() const;
  std::string tag_or(std::string_view key, std::string_view fallback = {}) const;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct CompletionResult {
  std::string text;
  Usage usage;
  std::chrono::milliseconds latency{0};
  std::string backend_id;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

class MockBackend : public Backend {
 public:
  std::string id() const override { return "mock"; }
  CompletionResult complete(const CompletionRequest& request) override;

  // Number of leading sentences the mock keeps for a prompt.
  static std::size_t summary_sentences(std::string_view persona, std::string_view constraints);
  static std::string summarize(std::string_view article, std::string_view persona,
                               std::string_view constraints);
  static std::string recommend(std::string_view goal);
  static std::string suggest(std::string_view block);
  static int score(std::string_view content);
};

class ScriptedBackend : public Backend {
 public:
  // Transcript: a JSON object mapping request hash to either the reply text
  // or an object with a "text" member.
  explicit ScriptedBackend(const nlohmann::json& transcript);
  static std::shared_ptr<ScriptedBackend> load(const std::filesystem::path& path);

  std::string id() const override { return "scripted"; }
  CompletionResult complete(const CompletionRequest& request) override;

 private:
  std::map<std::string, std::string> replies_;
};

// Forwards to another backend and keeps every exchange, so a live session
// can be turned into a scripted transcript.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {}

  std::string id() const override { return inner_->id(); }
  CompletionResult complete(const CompletionRequest& request) override;
  nlohmann::json transcript() const;

 private:
  std::shared_ptr<Backend> inner_;
  mutable std::mutex mu_;
  nlohmann::json transcript_ = nlohmann::json::object();
};

struct LiveConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-3.5-turbo";
  std::chrono::seconds timeout{60};
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};

  // PROMPTSCOPE_API_BASE, PROMPTSCOPE_API_KEY (or OPENAI_API_KEY),
  // PROMPTSCOPE_MODEL.
  static LiveConfig from_env();
};

class LiveBackend : public Backend {
 public:
  explicit LiveBackend(LiveConfig config);

  std::string id() const override { return "live"; }
  CompletionResult complete(const CompletionRequest& request) override;
  const LiveConfig& config() const { return config_; }

 private:
  LiveConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // path prefix before /chat/completions
};

// "mock", "live" or "scripted:<file>".
std::shared_ptr<Backend> make_backend(std::string_view spec);

}  // namespace promptscope::llm

#endif  // PROMPTSCOPE_LLM_BACKEND_HPP_
