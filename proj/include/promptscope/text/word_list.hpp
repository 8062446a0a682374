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
#ifndef PROMPTSCOPE_TEXT_WORD_LIST_HPP_
#define PROMPTSCOPE_TEXT_WORD_LIST_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace promptscope::text {

// A set of lowercase entries read from a one-entry-per-line UTF-8 file.
// Blank lines and lines starting with '#' are skipped.
class WordList {
 public:
  WordList() = default;

  static WordList parse(std::string_view contents);
  static WordList load(const std::filesystem::path& path);
  // One of the lists shipped in data/ (e.g. "abbreviations.txt").
  static WordList embedded(std::string_view name);

  void merge(const WordList& other);
  void add(std::string_view entry);
  bool contains(std::string_view entry) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

// key<TAB>value table with the same comment rules. Keys are kept verbatim.
using Table = std::unordered_map<std::string, std::string>;
Table parse_table(std::string_view contents);
Table load_table(const std::filesystem::path& path);
Table embedded_table(std::string_view name);

}  // namespace promptscope::text

#endif  // PROMPTSCOPE_TEXT_WORD_LIST_HPP_
