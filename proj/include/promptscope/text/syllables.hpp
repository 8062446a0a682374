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
#ifndef PROMPTSCOPE_TEXT_SYLLABLES_HPP_
#define PROMPTSCOPE_TEXT_SYLLABLES_HPP_

#include <string>
#include <string_view>
#include <unordered_map>

namespace promptscope::text {

// Vowel-group syllable heuristic with an exact-match exception table.
//
// Each maximal run of a/e/i/o/u/y counts once. A final "e" that stands alone
// after a consonant is treated as silent, except in a consonant+"le" ending
// ("table"). The count never drops below one.
class SyllableCounter {
 public:
  SyllableCounter() = default;
  explicit SyllableCounter(std::unordered_map<std::string, int> exceptions);

  static const SyllableCounter& standard();

  // Throws Error(NOT_A_WORD) when `word` has no alphabetic character.
  int count(std::string_view word) const;

 private:
  std::unordered_map<std::string, int> exceptions_;
};

inline int count_syllables(std::string_view word) {
  return SyllableCounter::standard().count(word);
}

}  // namespace promptscope::text

#endif  // PROMPTSCOPE_TEXT_SYLLABLES_HPP_
