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
#include "promptscope/text/tokenizer.hpp"

#include <array>

#include "promptscope/common/strings.hpp"

namespace promptscope::text {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Multi-byte punctuation peeled off chunk edges: curly quotes, ellipsis,
// en and em dashes.
constexpr std::array<std::string_view, 7> kWidePunct = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99",
    "\xE2\x80\xA6", "\xE2\x80\x93", "\xE2\x80\x94"};

std::size_t wide_punct_prefix(std::string_view s) {
  for (auto p : kWidePunct) {
    if (s.substr(0, p.size()) == p) return p.size();
  }
  return 0;
}

std::size_t wide_punct_suffix(std::string_view s) {
  for (auto p : kWidePunct) {
    if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) {
      return p.size();
    }
  }
  return 0;
}

bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && !is_ascii_alpha(c) && !is_digit(c) && !is_space(c);
}

bool is_terminator_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_terminal(c)) return false;
  }
  return true;
}

bool is_closer(std::string_view s) {
  return s == "\"" || s == "'" || s == ")" || s == "]" || s == "}" ||
         s == "\xE2\x80\x9D" || s == "\xE2\x80\x99";
}

}  // namespace

bool is_alpha_bearing(std::string_view token) {
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (is_ascii_alpha(c)) return true;
    auto u = static_cast<unsigned char>(c);
    // Lead byte of a multi-byte sequence that is not one of the peeled
    // punctuation marks.
    if (u >= 0xC0 && wide_punct_prefix(token.substr(i)) == 0) return true;
  }
  return false;
}

std::vector<std::string> TokenizedText::words() const {
  std::vector<std::string> out;
  out.reserve(word_count);
  for (const auto& t : tokens) {
    if (t.is_word) out.push_back(t.lower);
  }
  return out;
}

std::size_t TokenizedText::words_in(const SentenceSpan& s) const {
  std::size_t n = 0;
  for (std::size_t i = s.first; i < s.last; ++i) n += tokens[i].is_word;
  return n;
}

Tokenizer::Tokenizer(WordList abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

const Tokenizer& Tokenizer::standard() {
  static const Tokenizer instance(WordList::embedded("abbreviations.txt"));
  return instance;
}

bool Tokenizer::is_abbreviation(std::string_view lowered) const {
  if (abbreviations_.contains(lowered)) return true;
  // Single-letter initials ("J.") never end a sentence.
  return lowered.size() == 2 && is_ascii_alpha(lowered[0]) &&
         lowered[1] == '.';
}

TokenizedText Tokenizer::tokenize(std::string_view text) const {
  TokenizedText out;
  // Tokens with the index of the whitespace-delimited chunk they came from;
  // a terminator only closes a sentence at the end of its chunk.
  std::vector<std::size_t> chunk_of;

  auto emit = [&](std::size_t b, std::size_t e, std::size_t chunk) {
    Token t;
    t.begin = b;
    t.end = e;
    t.surface = std::string(text.substr(b, e - b));
    t.lower = to_lower_ascii(t.surface);
    t.is_word = is_alpha_bearing(t.surface);
    out.word_count += t.is_word;
    out.tokens.push_back(std::move(t));
    chunk_of.push_back(chunk);
  };

  std::size_t pos = 0;
  std::size_t chunk = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t cb = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    std::size_t ce = pos;

    // Leading punctuation, one token per mark. '$' and friends stay attached
    // when a digit follows.
    std::size_t b = cb;
    while (b < ce) {
      auto rest = text.substr(b, ce - b);
      if (std::size_t w = wide_punct_prefix(rest); w > 0) {
        emit(b, b + w, chunk);
        b += w;
        continue;
      }
      if (is_ascii_punct(text[b])) {
        bool currency = (text[b] == '$' || text[b] == '#') && b + 1 < ce &&
                        is_digit(text[b + 1]);
        if (currency) break;
        emit(b, b + 1, chunk);
        ++b;
        continue;
      }
      break;
    }

    // Trailing punctuation, collected right to left.
    std::vector<std::pair<std::size_t, std::size_t>> trailing;
    std::size_t e = ce;
    while (e > b) {
      auto core = text.substr(b, e - b);
      if (std::size_t w = wide_punct_suffix(core); w > 0) {
        trailing.emplace_back(e - w, e);
        e -= w;
        continue;
      }
      char c = text[e - 1];
      if (!is_ascii_punct(c)) break;
      if (c == '%' && e - b >= 2 && is_digit(text[e - 2])) break;
      if (c == '.') {
        auto lowered = to_lower_ascii(core);
        if (e - b >= 2 && is_abbreviation(lowered)) break;
      }
      if (is_terminal(c)) {
        // Group a run of terminal marks ("?!", "...") into one token.
        std::size_t s = e - 1;
        while (s > b && is_terminal(text[s - 1])) --s;
        trailing.emplace_back(s, e);
        e = s;
        continue;
      }
      trailing.emplace_back(e - 1, e);
      --e;
    }
    if (e > b) emit(b, e, chunk);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      emit(it->first, it->second, chunk);
    }
    ++chunk;
  }

  // Sentence boundaries.
  std::vector<SentenceSpan> raw;
  std::size_t first = 0;
  const auto& toks = out.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!is_terminator_token(toks[i].surface)) continue;
    std::size_t last = i + 1;
    while (last < toks.size() && chunk_of[last] == chunk_of[i] &&
           is_closer(toks[last].surface)) {
      ++last;
    }
    bool chunk_ends = last == toks.size() || chunk_of[last] != chunk_of[i];
    if (!chunk_ends) continue;
    raw.push_back({first, last});
    first = last;
    i = last - 1;
  }
  if (first < toks.size()) raw.push_back({first, toks.size()});

  // Fold sentences without any word into a neighbour so every sentence
  // carries at least one word whenever the text has one.
  for (const auto& s : raw) {
    bool has_word = out.words_in(s) > 0;
    if (!has_word && !out.sentences.empty()) {
      out.sentences.back().last = s.last;
    } else if (!out.sentences.empty() &&
               out.words_in(out.sentences.back()) == 0) {
      out.sentences.back().last = s.last;
    } else {
      out.sentences.push_back(s);
    }
  }
  return out;
}

}  // namespace promptscope::text
