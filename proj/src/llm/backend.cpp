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
#include "promptscope/llm/backend.hpp"

#include <array>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/hash.hpp"
#include "promptscope/common/strings.hpp"
#include "promptscope/text/tokenizer.hpp"

namespace promptscope::llm {
namespace {

std::string last_user_content(const CompletionRequest& r) {
  for (auto it = r.messages.rbegin(); it != r.messages.rend(); ++it) {
    if (it->role == "user") return it->content;
  }
  return r.messages.empty() ? std::string() : r.messages.back().content;
}

std::int64_t rough_tokens(std::string_view s) {
  std::int64_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

bool is_terminator(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c != '.' && c != '!' && c != '?') return false;
  }
  return true;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

void CompletionRequest::validate() const {
  if (messages.empty()) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_REQUEST", "request has no messages");
  }
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_REQUEST", "temperature out of range",
                "temperature must lie in [0, 2]");
  }
}

nlohmann::json CompletionRequest::wire() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json body = {{"model", model}, {"temperature", temperature}, {"messages", msgs}};
  if (json_mode) body["response_format"] = {{"type", "json_object"}};
  return body;
}

std::string CompletionRequest::hash() const { return sha256_hex(wire().dump()); }

std::string CompletionRequest::tag_or(std::string_view key, std::string_view fallback) const {
  auto it = tags.find(key);
  return it == tags.end() ? std::string(fallback) : it->second;
}

// ---- mock ----

std::size_t MockBackend::summary_sentences(std::string_view persona,
                                           std::string_view constraints) {
  std::string key(persona);
  key += constraints;
  return 1 + static_cast<std::size_t>(fnv1a64(key) % 3);
}

std::string MockBackend::summarize(std::string_view article, std::string_view persona,
                                   std::string_view constraints) {
  const auto tt = text::tokenize(article);
  const bool exclaim = contains_ci(constraints, "positive");
  const std::size_t k = std::min(summary_sentences(persona, constraints), tt.sentences.size());
  std::string out = exclaim ? "Good news! " : "";
  for (std::size_t i = 0; i < k; ++i) {
    const auto& span = tt.sentences[i];
    if (span.size() == 0) continue;
    std::size_t begin = tt.tokens[span.first].begin;
    std::string sentence(article.substr(begin, tt.tokens[span.last - 1].end - begin));
    if (exclaim) {
      for (std::size_t t = span.last; t-- > span.first;) {
        if (is_terminator(tt.tokens[t].surface)) {
          sentence.replace(tt.tokens[t].begin - begin, tt.tokens[t].end - tt.tokens[t].begin,
                           "!");
          break;
        }
      }
    }
    if (i > 0) out += ' ';
    out += sentence;
  }
  return out;
}

std::string MockBackend::recommend(std::string_view goal) {
  struct Rule {
    std::string_view keyword;
    std::string_view feature;
    std::string_view level;
  };
  static constexpr std::array<Rule, 12> kRules = {{
      {"kid", "complexity", "Elementary"},
      {"child", "complexity", "Elementary"},
      {"teen", "complexity", "Middle School"},
      {"academic", "formality", "Very Formal"},
      {"scholar", "formality", "Very Formal"},
      {"casual", "formality", "Informal"},
      {"positive", "sentiment", "Positive"},
      {"upbeat", "sentiment", "Positive"},
      {"brief", "length", "Short"},
      {"short", "length", "Short"},
      {"accurate", "faithfulness", "Good"},
      {"natural", "naturalness", "Good"},
  }};
  nlohmann::json features = nlohmann::json::object();
  std::string why;
  for (const auto& r : kRules) {
    std::string f(r.feature);
    if (contains_ci(goal, r.keyword) && !features.contains(f)) {
      features[f] = std::string(r.level);
      why += (why.empty() ? "" : " ") + std::string("The goal mentions '") +
             std::string(r.keyword) + "', so " + f + " should be " + std::string(r.level) + ".";
    }
  }
  if (features.empty()) {
    features["faithfulness"] = "Good";
    features["naturalness"] = "Good";
    why = "No specific audience was named, so the summary should stay faithful and read "
          "naturally.";
  }
  return nlohmann::json{{"features", features}, {"explanation", why}}.dump();
}

std::string MockBackend::suggest(std::string_view block) {
  if (block == "persona") {
    return "You are a science journalist who writes for a general newspaper audience.";
  }
  if (block == "context") {
    return "The summary appears in a daily newsletter read on phones during a commute.";
  }
  if (block == "constraints") {
    return "Use at most three sentences. Avoid jargon. Keep every number from the article.";
  }
  if (block == "examples") {
    return "Star two existing summaries whose tone and length you want the model to copy.";
  }
  if (block == "data") return "Summarize the following article:\n{{ARTICLE}}";
  return "No suggestion available.";
}

int MockBackend::score(std::string_view content) {
  return 1 + static_cast<int>(fnv1a64(content) % 5);
}

CompletionResult MockBackend::complete(const CompletionRequest& request) {
  request.validate();
  const std::string task = request.tag_or(tag::kTask, request.json_mode ? "recommend" : "");
  const std::string user = last_user_content(request);
  CompletionResult out;
  out.backend_id = id();
  if (task == "recommend") {
    out.text = recommend(user);
  } else if (task == "suggest") {
    out.text = suggest(request.tag_or(tag::kBlock));
  } else if (task == "score") {
    out.text = std::to_string(score(user));
  } else {
    out.text = summarize(request.tag_or(tag::kArticle, user), request.tag_or(tag::kPersona),
                         request.tag_or(tag::kConstraints));
  }
  for (const auto& m : request.messages) out.usage.prompt_tokens += rough_tokens(m.content);
  out.usage.completion_tokens = rough_tokens(out.text);
  return out;
}

// ---- scripted ----

ScriptedBackend::ScriptedBackend(const nlohmann::json& transcript) {
  if (!transcript.is_object()) {
    throw Error(ErrorKind::kInvalidInput, "TRANSCRIPT_INVALID", "transcript must be an object");
  }
  for (const auto& [hash, reply] : transcript.items()) {
    if (reply.is_string()) {
      replies_[hash] = reply.get<std::string>();
    } else if (reply.is_object() && reply.contains("text") && reply["text"].is_string()) {
      replies_[hash] = reply["text"].get<std::string>();
    } else {
      throw Error(ErrorKind::kInvalidInput, "TRANSCRIPT_INVALID", "transcript entry invalid",
                  "entry " + hash + " has no text");
    }
  }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "TRANSCRIPT_INVALID", "transcript is not valid JSON",
                e.what());
  }
  return std::make_shared<ScriptedBackend>(j);
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
  request.validate();
  const std::string h = request.hash();
  auto it = replies_.find(h);
  if (it == replies_.end()) {
    throw Error(ErrorKind::kBackend, "NO_FIXTURE", "no fixture", "request hash " + h);
  }
  CompletionResult out;
  out.text = it->second;
  out.backend_id = id();
  return out;
}

CompletionResult RecordingBackend::complete(const CompletionRequest& request) {
  auto result = inner_->complete(request);
  std::lock_guard lock(mu_);
  transcript_[request.hash()] = {{"text", result.text}};
  return result;
}

nlohmann::json RecordingBackend::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

// ---- live ----

LiveConfig LiveConfig::from_env() {
  LiveConfig c;
  c.base_url = env_or("PROMPTSCOPE_API_BASE", c.base_url);
  c.api_key = env_or("PROMPTSCOPE_API_KEY", env_or("OPENAI_API_KEY", ""));
  c.model = env_or("PROMPTSCOPE_MODEL", c.model);
  return c;
}

LiveBackend::LiveBackend(LiveConfig config) : config_(std::move(config)) {
  std::string url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  auto scheme = url.find("://");
  auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  origin_ = slash == std::string::npos ? url : url.substr(0, slash);
  path_ = slash == std::string::npos ? "" : url.substr(slash);
}

CompletionResult LiveBackend::complete(const CompletionRequest& request) {
  request.validate();
  auto body = request.wire();
  if (request.model.empty()) body["model"] = config_.model;
  const std::string payload = body.dump();

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

  const auto start = std::chrono::steady_clock::now();
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1 << (attempt - 1)));
    auto res = client.Post(path_ + "/chat/completions", payload, "application/json");
    if (!res) {
      last_failure = "network error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorKind::kBackend, "BACKEND_ERROR", "backend request failed",
                  "status " + std::to_string(res->status) + ": " + res->body);
    }
    CompletionResult out;
    try {
      auto j = nlohmann::json::parse(res->body);
      out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      if (j.contains("usage")) {
        out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
        out.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kBackend, "BACKEND_ERROR", "backend response malformed", e.what());
    }
    out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    out.backend_id = id();
    return out;
  }
  throw Error(ErrorKind::kBackend, "BACKEND_ERROR", "backend request failed",
              last_failure + " after " + std::to_string(config_.max_retries + 1) + " attempts");
}

std::shared_ptr<Backend> make_backend(std::string_view spec) {
  if (spec == "mock") return std::make_shared<MockBackend>();
  if (spec == "live") return std::make_shared<LiveBackend>(LiveConfig::from_env());
  constexpr std::string_view kScripted = "scripted:";
  if (spec.substr(0, kScripted.size()) == kScripted) {
    return ScriptedBackend::load(std::string(spec.substr(kScripted.size())));
  }
  throw Error(ErrorKind::kInvalidInput, "UNKNOWN_BACKEND",
              "unknown backend '" + std::string(spec) + "'",
              "expected mock, live or scripted:<file>");
}

}  // namespace promptscope::llm
