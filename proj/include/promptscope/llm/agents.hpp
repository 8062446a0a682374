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
#ifndef PROMPTSCOPE_LLM_AGENTS_HPP_
#define PROMPTSCOPE_LLM_AGENTS_HPP_

#include <string>
#include <string_view>

#include "promptscope/analytics/explore.hpp"
#include "promptscope/llm/gateway.hpp"

namespace promptscope::llm {

struct AgentOptions {
  std::string model;  // empty uses the gateway default
  double temperature = 0.0;
};

// One paragraph per feature listing its meaning and level ranges.
std::string feature_descriptions();

std::string recommendation_system_prompt();
std::string suggestion_system_prompt(std::string_view block);

struct Recommendation {
  analytics::FeatureConfig config;
  std::string explanation;
};

// Parses a reply of the form
//   {"features": {"<feature>": "<level>" | {"level": "<level>"}}, "explanation": "..."}
// Throws Error(MALFORMED_RECOMMENDATION) on anything else.
Recommendation parse_recommendation(std::string_view reply);

// Throws Error(GOAL_REQUIRED) for a blank goal and Error(MALFORMED_RECOMMENDATION)
// when the reply is still unusable after one re-ask.
Recommendation recommend_features(Gateway& gateway, std::string_view goal,
                                  const AgentOptions& options = {});

// Throws Error(UNKNOWN_BLOCK) for names outside the five blocks.
std::string suggest_block(Gateway& gateway, std::string_view block, std::string_view question,
                          const AgentOptions& options = {});

}  // namespace promptscope::llm

#endif  // PROMPTSCOPE_LLM_AGENTS_HPP_
