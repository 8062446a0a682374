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
#ifndef PROMPTSCOPE_WORKSPACE_DATASET_HPP_
#define PROMPTSCOPE_WORKSPACE_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace promptscope::workspace {

struct Document {
  std::string id;
  std::string text;
  std::string title;

  bool operator==(const Document& o) const {
    return id == o.id && text == o.text && title == o.title;
  }
};

class Dataset {
 public:
  Dataset() = default;

  // One JSON object per line: {"id", "text", "title"?}. Blank lines are
  // skipped. Throws DATASET_INVALID (with the line number), DUPLICATE_ID or
  // EMPTY_DATASET.
  static Dataset parse(std::string_view jsonl);
  static Dataset load(const std::filesystem::path& path);

  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  const Document* find(std::string_view id) const;
  const Document& at(std::string_view id) const;  // throws UNKNOWN_DOCUMENT
  std::optional<std::size_t> index_of(std::string_view id) const;

  std::string to_jsonl() const;

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace promptscope::workspace

#endif  // PROMPTSCOPE_WORKSPACE_DATASET_HPP_
