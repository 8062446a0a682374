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
#ifndef PROMPTSCOPE_LLM_PROMPT_HPP_
#define PROMPTSCOPE_LLM_PROMPT_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace promptscope::llm {

inline constexpr std::string_view kArticlePlaceholder = "{{ARTICLE}}";

inline constexpr std::array<std::string_view, 5> kBlockNames = {
    "persona", "context", "constraints", "examples", "data"};

bool is_block_name(std::string_view name);
// Short definition of a block, used by the suggestion agent and the UI.
std::string_view block_definition(std::string_view name);

struct PromptBlocks {
  std::string persona;
  std::string context;
  std::string constraints;
  std::string examples;
  std::string data = std::string(kArticlePlaceholder);

  // Throws Error(DATA_BLOCK_MALFORMED) unless data holds exactly one
  // placeholder.
  void validate() const;

  nlohmann::json to_json() const;
  static PromptBlocks from_json(const nlohmann::json& j);
};

struct Message {
  std::string role;
  std::string content;

  bool operator==(const Message& o) const { return role == o.role && content == o.content; }
};

// A single user message with labelled sections in block order; empty blocks
// are left out together with their label.
std::vector<Message> assemble_prompt(const PromptBlocks& blocks, std::string_view article,
                                     const std::vector<std::string>& example_summaries);

}  // namespace promptscope::llm

#endif  // PROMPTSCOPE_LLM_PROMPT_HPP_
