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
#include "promptscope/workspace/cache.hpp"

#include <nlohmann/json.hpp>

#include "promptscope/common/files.hpp"
#include "promptscope/common/hash.hpp"

namespace promptscope::workspace {

std::string cache_key(const CacheKeyParts& parts) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : parts.messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json j = {{"messages", msgs},
                      {"document", parts.document_id},
                      {"backend", parts.backend_id},
                      {"model", parts.model},
                      {"temperature", parts.temperature}};
  return sha256_hex(j.dump());
}

OutputCache::OutputCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path OutputCache::file_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".txt");
}

std::optional<std::string> OutputCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (dir_.empty()) return std::nullopt;
  auto path = file_for(key);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  auto text = read_file(path);
  memory_.emplace(key, text);
  return text;
}

std::string OutputCache::put(const std::string& key, const std::string& text) {
  if (auto existing = get(key)) return *existing;
  std::lock_guard lock(mu_);
  auto [it, inserted] = memory_.emplace(key, text);
  if (inserted && !dir_.empty()) {
    auto path = file_for(key);
    std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, text);
  }
  return it->second;
}

std::size_t OutputCache::size() const {
  std::lock_guard lock(mu_);
  if (dir_.empty()) return memory_.size();
  std::size_t n = 0;
  std::error_code ec;
  if (!std::filesystem::exists(dir_, ec)) return 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir_)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") ++n;
  }
  return n;
}

}  // namespace promptscope::workspace
