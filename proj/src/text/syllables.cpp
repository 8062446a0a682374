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
#include "promptscope/text/syllables.hpp"

#include <cstdlib>

#include "promptscope/common/error.hpp"
#include "promptscope/text/tokenizer.hpp"
#include "promptscope/text/word_list.hpp"

namespace promptscope::text {
namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

}  // namespace

SyllableCounter::SyllableCounter(std::unordered_map<std::string, int> exceptions)
    : exceptions_(std::move(exceptions)) {}

const SyllableCounter& SyllableCounter::standard() {
  static const SyllableCounter instance = [] {
    std::unordered_map<std::string, int> table;
    for (const auto& [word, n] : embedded_table("syllable_exceptions.tsv")) {
      table.emplace(word, std::atoi(n.c_str()));
    }
    return SyllableCounter(std::move(table));
  }();
  return instance;
}

int SyllableCounter::count(std::string_view word) const {
  if (!is_alpha_bearing(word)) {
    throw Error(ErrorKind::kInvalidInput, "NOT_A_WORD", "not a word",
                std::string(word));
  }
  std::string letters;
  for (char c : word) {
    if (c >= 'A' && c <= 'Z') letters.push_back(static_cast<char>(c - 'A' + 'a'));
    else if (c >= 'a' && c <= 'z') letters.push_back(c);
  }
  if (letters.empty()) return 1;
  if (auto it = exceptions_.find(letters); it != exceptions_.end()) {
    return it->second;
  }
  int groups = 0;
  bool in_group = false;
  for (char c : letters) {
    bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = letters.size();
  if (n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2])) {
    bool consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
    if (!consonant_le) --groups;
  }
  return groups < 1 ? 1 : groups;
}

}  // namespace promptscope::text
