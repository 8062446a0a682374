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
#ifndef PROMPTSCOPE_WORKSPACE_CACHE_HPP_
#define PROMPTSCOPE_WORKSPACE_CACHE_HPP_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "promptscope/llm/prompt.hpp"

namespace promptscope::workspace {

struct CacheKeyParts {
  std::vector<llm::Message> messages;
  std::string document_id;
  std::string backend_id;
  std::string model;
  double temperature = 0;
};

std::string cache_key(const CacheKeyParts& parts);

// Content-addressed store of completions. The first output stored under a key
// wins; later puts with the same key are ignored. When a directory is given,
// entries live as <dir>/<key[0:2]>/<key>.txt.
class OutputCache {
 public:
  OutputCache() = default;
  explicit OutputCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  // Returns the stored output, which differs from text if the key existed.
  std::string put(const std::string& key, const std::string& text);
  std::size_t size() const;

 private:
  std::filesystem::path file_for(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::string> memory_;
};

}  // namespace promptscope::workspace

#endif  // PROMPTSCOPE_WORKSPACE_CACHE_HPP_
