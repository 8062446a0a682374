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
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "promptscope/common/error.hpp"
#include "promptscope/text/stemmer.hpp"
#include "promptscope/text/syllables.hpp"
#include "promptscope/text/tokenizer.hpp"

namespace promptscope::text {
namespace {

std::vector<std::string> surfaces(const TokenizedText& t) {
  std::vector<std::string> out;
  for (const auto& tok : t.tokens) out.push_back(tok.surface);
  return out;
}

TEST(Tokenizer, EmptyInput) {
  auto t = tokenize("");
  EXPECT_EQ(t.word_count, 0u);
  EXPECT_EQ(t.sentence_count(), 0u);
  auto ws = tokenize("   \n\t ");
  EXPECT_EQ(ws.word_count, 0u);
  EXPECT_EQ(ws.sentence_count(), 0u);
}

TEST(Tokenizer, SimpleSentence) {
  auto t = tokenize("The cat sat.");
  EXPECT_EQ(t.word_count, 3u);
  EXPECT_EQ(t.sentence_count(), 1u);
  EXPECT_EQ(surfaces(t), (std::vector<std::string>{"The", "cat", "sat", "."}));
}

TEST(Tokenizer, AbbreviationDoesNotSplit) {
  auto t = tokenize("Dr. Smith left. He ran!");
  EXPECT_EQ(t.word_count, 5u);
  ASSERT_EQ(t.sentence_count(), 2u);
  EXPECT_EQ(t.tokens[t.sentences[1].first].surface, "He");
}

TEST(Tokenizer, InitialsAndNumbers) {
  auto t = tokenize("J. R. Smith paid $4.50 (about 12%) in 2019.");
  auto s = surfaces(t);
  EXPECT_EQ(t.sentence_count(), 1u);
  EXPECT_NE(std::find(s.begin(), s.end(), "J."), s.end());
  EXPECT_NE(std::find(s.begin(), s.end(), "$4.50"), s.end());
  EXPECT_NE(std::find(s.begin(), s.end(), "12%"), s.end());
  EXPECT_NE(std::find(s.begin(), s.end(), "("), s.end());
  EXPECT_EQ(t.word_count, 6u);  // J. R. Smith paid about in
}

TEST(Tokenizer, GroupedTerminatorsAndQuotes) {
  auto t = tokenize("\"Really?!\" she asked. Yes...");
  ASSERT_EQ(t.sentence_count(), 3u);
  auto s = surfaces(t);
  EXPECT_NE(std::find(s.begin(), s.end(), "?!"), s.end());
  EXPECT_NE(std::find(s.begin(), s.end(), "..."), s.end());
}

TEST(Tokenizer, QuotedTerminatorFollowedByTextClosesSentence) {
  auto t = tokenize("He said \"stop.\" Then he left.");
  EXPECT_EQ(t.sentence_count(), 2u);
}

TEST(Tokenizer, InternalPunctuationStaysInToken) {
  auto t = tokenize("A well-known don't e.g.x case");
  auto s = surfaces(t);
  EXPECT_NE(std::find(s.begin(), s.end(), "well-known"), s.end());
  EXPECT_NE(std::find(s.begin(), s.end(), "don't"), s.end());
}

TEST(Tokenizer, WordlessSentencesMerge) {
  auto t = tokenize("Hello there. ... !!! Bye now.");
  EXPECT_EQ(t.sentence_count(), 2u);
  for (const auto& s : t.sentences) EXPECT_GT(t.words_in(s), 0u);
}

TEST(Tokenizer, PathologicalInputIsOneSentence) {
  auto t = tokenize("no terminators at all here");
  EXPECT_EQ(t.sentence_count(), 1u);
  auto p = tokenize("!!! ??? ...");
  EXPECT_EQ(p.word_count, 0u);
  EXPECT_EQ(p.sentence_count(), 1u);
}

TEST(Tokenizer, OffsetsMatchSurface) {
  std::string text = "Caf\xC3\xA9 \xE2\x80\x9COlé\xE2\x80\x9D, said Ann. Fine.";
  auto t = tokenize(text);
  for (const auto& tok : t.tokens) {
    EXPECT_EQ(text.substr(tok.begin, tok.end - tok.begin), tok.surface);
  }
  EXPECT_EQ(t.word_count, 5u);
}

// Random texts over a small alphabet: every sentence partitions the tokens
// contiguously and every non-empty text with a word has word-bearing sentences.
TEST(Tokenizer, PropertySentencesPartitionTokens) {
  std::mt19937 rng(7);
  const std::string alphabet = "ab .!?,\"'-$5%\n";
  for (int iter = 0; iter < 2000; ++iter) {
    std::string text;
    int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) text.push_back(alphabet[rng() % alphabet.size()]);
    auto t = tokenize(text);
    std::size_t expect = 0;
    for (const auto& s : t.sentences) {
      ASSERT_EQ(s.first, expect) << text;
      ASSERT_GT(s.last, s.first) << text;
      expect = s.last;
      if (t.word_count > 0) {
        ASSERT_GT(t.words_in(s), 0u) << text;
      }
    }
    ASSERT_EQ(expect, t.tokens.size()) << text;
    std::size_t words = 0;
    for (const auto& tok : t.tokens) {
      words += tok.is_word;
      ASSERT_EQ(text.substr(tok.begin, tok.end - tok.begin), tok.surface);
    }
    ASSERT_EQ(words, t.word_count);
  }
}

TEST(Syllables, Basics) {
  EXPECT_EQ(count_syllables("cat"), 1);
  EXPECT_EQ(count_syllables("table"), 2);
  EXPECT_EQ(count_syllables("a"), 1);
  EXPECT_EQ(count_syllables("make"), 1);
  EXPECT_EQ(count_syllables("the"), 1);
  EXPECT_EQ(count_syllables("beautiful"), 3);
  EXPECT_EQ(count_syllables("Elementary"), 5);
  EXPECT_EQ(count_syllables("idea"), 3);
  EXPECT_EQ(count_syllables("caf\xC3\xA9"), 1);
}

TEST(Syllables, NonWordThrows) {
  try {
    count_syllables("1234");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NOT_A_WORD");
  }
}

TEST(Syllables, PropertyAtLeastOneAtMostLetters) {
  std::mt19937 rng(11);
  for (int i = 0; i < 3000; ++i) {
    std::string w;
    int len = 1 + static_cast<int>(rng() % 12);
    for (int j = 0; j < len; ++j) w.push_back(static_cast<char>('a' + rng() % 26));
    int n = count_syllables(w);
    ASSERT_GE(n, 1) << w;
    ASSERT_LE(n, len) << w;
  }
}

TEST(Stemmer, ReferencePairs) {
  EXPECT_EQ(stem("running"), "run");
  EXPECT_EQ(stem("cat"), "cat");
  EXPECT_EQ(stem("cats"), "cat");
  EXPECT_EQ(porter_step("relational"), "relat");
  EXPECT_EQ(porter_step("caresses"), "caress");
  EXPECT_EQ(porter_step("ponies"), "poni");
  EXPECT_EQ(porter_step("hopping"), "hop");
  EXPECT_EQ(porter_step("generalizations"), "gener");
  EXPECT_EQ(porter_step("agreed"), "agre");
  EXPECT_EQ(porter_step("happy"), "happi");
}

TEST(Stemmer, PropertyIdempotent) {
  std::mt19937 rng(3);
  const std::string letters = "aeioubcdglmnrstyz";
  for (int i = 0; i < 5000; ++i) {
    std::string w;
    int len = 1 + static_cast<int>(rng() % 14);
    for (int j = 0; j < len; ++j) w.push_back(letters[rng() % letters.size()]);
    auto s = stem(w);
    ASSERT_EQ(stem(s), s) << w;
  }
}

}  // namespace
}  // namespace promptscope::text
