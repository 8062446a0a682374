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
#include "promptscope/llm/agents.hpp"

#include <cmath>
#include <sstream>

#include "promptscope/common/error.hpp"
#include "promptscope/common/strings.hpp"
#include "promptscope/metrics/levels.hpp"

namespace promptscope::llm {
namespace {

std::string_view feature_meaning(metrics::Feature f) {
  switch (f) {
    case metrics::Feature::kComplexity:
      return "Reading difficulty, 0 to 100. It rises with longer sentences and words with "
             "more syllables.";
    case metrics::Feature::kFormality:
      return "Lexical variety measured over the word stream. Richer vocabulary reads as "
             "more formal.";
    case metrics::Feature::kSentiment:
      return "Overall emotional tone from -1 (negative) to 1 (positive).";
    case metrics::Feature::kFaithfulness:
      return "Share of the summary's named entities that also appear in the article, 0 to 1.";
    case metrics::Feature::kNaturalness:
      return "How evenly balanced the sentence structure is, scaled to 0 to 1 across the "
             "corpus.";
    case metrics::Feature::kLength:
      return "Number of words in the summary.";
  }
  return {};
}

std::string format_bound(double v) {
  if (std::isinf(v)) return "and above";
  std::ostringstream os;
  os << v;
  return os.str();
}

Error malformed(const std::string& detail) {
  return Error(ErrorKind::kBackend, "MALFORMED_RECOMMENDATION", "malformed recommendation",
               detail);
}


}  // namespace

std::string feature_descriptions() {
  std::string out;
  for (auto f : metrics::kAllFeatures) {
    out += std::string(metrics::feature_name(f)) + ": " + std::string(feature_meaning(f)) +
           "\n  levels:";
    for (const auto& level : metrics::level_names(f)) {
      auto r = metrics::level_range(f, level);
      out += " " + level + " [" + format_bound(r.lower) +
             (std::isinf(r.upper) ? " and above" : ", " + format_bound(r.upper) + ")") + ";";
    }
    out.pop_back();
    out += "\n";
  }
  return out;
}

std::string recommendation_system_prompt() {
  return "You help people configure summaries. Each summary is described by the features "
         "below, and every feature is split into named levels.\n\n" +
         feature_descriptions() +
         "\nRead the user's goal and decide which features matter for it. For each one, pick "
         "exactly one level from its list. Leave out features the goal does not bear on.\n"
         "Answer with one JSON object and nothing else, shaped as "
         "{\"features\": {\"<feature>\": \"<level>\"}, \"explanation\": \"<why these levels>\"}.";
}

std::string suggestion_system_prompt(std::string_view block) {
  return "You help people write prompts for a model that summarizes articles. A prompt is "
         "split into five blocks: persona, context, constraints, examples and data. The user "
         "is working on the " +
         std::string(block) + " block.\n\nDefinition of that block: " +
         std::string(block_definition(block)) +
         "\n\nAnswer the user's question with text they can paste into the block directly.";
}

Recommendation parse_recommendation(std::string_view reply) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception&) {
    throw malformed("reply is not a JSON object");
  }
  if (!j.is_object() || !j.contains("features") || !j["features"].is_object()) {
    throw malformed("reply lacks a features object");
  }
  Recommendation rec;
  for (const auto& [name, value] : j["features"].items()) {
    auto f = metrics::parse_feature(name);
    if (!f) throw malformed("unknown feature '" + name + "'");
    std::string level;
    if (value.is_string()) {
      level = value.get<std::string>();
    } else if (value.is_object() && value.contains("level") && value["level"].is_string()) {
      level = value["level"].get<std::string>();
    } else if (value.is_null()) {
      continue;
    } else {
      throw malformed("feature '" + name + "' has no level");
    }
    if (!metrics::is_level(*f, level)) {
      std::string legal;
      for (const auto& n : metrics::level_names(*f)) legal += (legal.empty() ? "" : ", ") + n;
      throw malformed("unknown level '" + level + "' for " + name + "; legal levels: " + legal);
    }
    auto& t = rec.config.targets[static_cast<std::size_t>(*f)];
    t.included = true;
    t.level = level;
  }
  if (j.contains("explanation")) {
    if (!j["explanation"].is_string()) throw malformed("explanation must be text");
    rec.explanation = j["explanation"].get<std::string>();
  }
  try {
    rec.config.validate();
  } catch (const Error& e) {
    throw malformed(std::string(e.what()) + (e.detail().empty() ? "" : ": " + e.detail()));
  }
  return rec;
}

Recommendation recommend_features(Gateway& gateway, std::string_view goal,
                                  const AgentOptions& options) {
  if (trim(goal).empty()) {
    throw Error(ErrorKind::kInvalidInput, "GOAL_REQUIRED", "goal required");
  }
  CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.json_mode = true;
  req.tags[std::string(tag::kTask)] = "recommend";
  req.messages = {{"system", recommendation_system_prompt()}, {"user", std::string(goal)}};
  auto first = gateway.complete(req);
  try {
    return parse_recommendation(first.text);
  } catch (const Error& e) {
    req.messages.push_back({"assistant", first.text});
    req.messages.push_back({"user", "That reply could not be used (" + e.detail() +
                                        "). Reply again with only the JSON object."});
  }
  auto second = gateway.complete(req);
  return parse_recommendation(second.text);
}

std::string suggest_block(Gateway& gateway, std::string_view block, std::string_view question,
                          const AgentOptions& options) {
  if (!is_block_name(block)) {
    throw Error(ErrorKind::kInvalidInput, "UNKNOWN_BLOCK",
                "unknown block '" + std::string(block) + "'",
                "blocks: persona, context, constraints, examples, data");
  }
  CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.tags[std::string(tag::kTask)] = "suggest";
  req.tags[std::string(tag::kBlock)] = std::string(block);
  req.messages = {{"system", suggestion_system_prompt(block)},
                  {"user", question.empty() ? std::string("Suggest text for this block.")
                                            : std::string(question)}};
  return gateway.complete(req).text;
}

}  // namespace promptscope::llm
