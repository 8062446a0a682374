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
#ifndef PROMPTSCOPE_TEXT_TOKENIZER_HPP_
#define PROMPTSCOPE_TEXT_TOKENIZER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "promptscope/text/word_list.hpp"

namespace promptscope::text {

struct Token {
  std::string surface;
  std::string lower;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
  bool is_word = false;   // carries at least one alphabetic character
};

// Half-open range of token indices.
struct SentenceSpan {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const { return last - first; }
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;
  std::size_t word_count = 0;

  std::size_t sentence_count() const { return sentences.size(); }
  // Word tokens (lowercased) in document order.
  std::vector<std::string> words() const;
  std::size_t words_in(const SentenceSpan& s) const;
};

// Whitespace/punctuation tokenizer with an abbreviation guard for sentence
// boundaries. Sentences end at a run of . ! ? that is followed (after any
// closing quotes or brackets) by whitespace or end of input.
class Tokenizer {
 public:
  explicit Tokenizer(WordList abbreviations);

  // Uses the shipped abbreviation list.
  static const Tokenizer& standard();

  TokenizedText tokenize(std::string_view text) const;

 private:
  bool is_abbreviation(std::string_view lowered_with_period) const;

  WordList abbreviations_;
};

inline TokenizedText tokenize(std::string_view text) {
  return Tokenizer::standard().tokenize(text);
}

bool is_alpha_bearing(std::string_view token);

}  // namespace promptscope::text

#endif  // PROMPTSCOPE_TEXT_TOKENIZER_HPP_
