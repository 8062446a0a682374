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
#include "promptscope/llm/prompt.hpp"

#include "promptscope/common/error.hpp"

namespace promptscope::llm {
namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

bool is_block_name(std::string_view name) {
  for (auto b : kBlockNames) {
    if (b == name) return true;
  }
  return false;
}

std::string_view block_definition(std::string_view name) {
  if (name == "persona") {
    return "The identity the model speaks as: a role, its audience, and the voice that role "
           "would use when writing.";
  }
  if (name == "context") {
    return "Background the model needs before it starts: where the summary will be read, why "
           "it is needed, and any facts about the readers.";
  }
  if (name == "constraints") {
    return "Rules the output must obey, such as length limits, tone, vocabulary, format, or "
           "content to keep or drop.";
  }
  if (name == "examples") {
    return "Sample summaries that already look the way the output should look, given so the "
           "model can imitate them.";
  }
  if (name == "data") {
    return "The input to transform. It wraps the article, marked by the {{ARTICLE}} "
           "placeholder, with any instruction that introduces it.";
  }
  return {};
}

void PromptBlocks::validate() const {
  std::size_t n = count_occurrences(data, kArticlePlaceholder);
  if (n != 1) {
    throw Error(ErrorKind::kInvalidInput, "DATA_BLOCK_MALFORMED", "data block malformed",
                "data block must contain exactly one {{ARTICLE}} placeholder, found " +
                    std::to_string(n));
  }
}

nlohmann::json PromptBlocks::to_json() const {
  return {{"persona", persona},
          {"context", context},
          {"constraints", constraints},
          {"examples", examples},
          {"data", data}};
}

PromptBlocks PromptBlocks::from_json(const nlohmann::json& j) {
  PromptBlocks b;
  b.persona = j.value("persona", "");
  b.context = j.value("context", "");
  b.constraints = j.value("constraints", "");
  b.examples = j.value("examples", "");
  b.data = j.value("data", std::string(kArticlePlaceholder));
  return b;
}

std::vector<Message> assemble_prompt(const PromptBlocks& blocks, std::string_view article,
                                     const std::vector<std::string>& example_summaries) {
  blocks.validate();
  std::string examples = blocks.examples;
  for (const auto& s : example_summaries) {
    if (!examples.empty()) examples += "\n\n";
    examples += "Example summary:\n" + s;
  }
  std::string data = blocks.data;
  data.replace(data.find(kArticlePlaceholder), kArticlePlaceholder.size(), article);

  const std::array<std::pair<std::string_view, const std::string*>, 5> sections = {{
      {"Persona", &blocks.persona},
      {"Context", &blocks.context},
      {"Constraints", &blocks.constraints},
      {"Examples", &examples},
      {"Data", &data},
  }};
  std::string content;
  for (const auto& [label, body] : sections) {
    if (body->empty()) continue;
    if (!content.empty()) content += "\n\n";
    content += std::string(label) + ":\n" + *body;
  }
  return {{"user", content}};
}

}  // namespace promptscope::llm
