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
#include "promptscope/annotate/annotation.hpp"

#include <nlohmann/json.hpp>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/strings.hpp"

namespace promptscope::annotate {
namespace {

using text::SentenceSpan;
using text::Token;
using text::TokenizedText;

Error misaligned(const std::string& detail) {
  return Error(ErrorKind::kInvalidInput, "ANNOTATION_MISALIGNED",
               "annotation misaligned", detail);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_capitalized(const Token& t) {
  return t.is_word && !t.surface.empty() && t.surface[0] >= 'A' &&
         t.surface[0] <= 'Z';
}

bool has_digit(std::string_view s) {
  for (char c : s) {
    if (c >= '0' && c <= '9') return true;
  }
  return false;
}

// Depth of each token below the root (root depth 0).
std::vector<int> depths(const SentenceParse& p) {
  const std::size_t n = p.heads.size();
  std::vector<int> d(n, -1);
  d[p.root] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> path;
    std::size_t v = i;
    while (d[v] < 0) {
      path.push_back(v);
      v = p.heads[v];
    }
    int base = d[v];
    for (auto it = path.rbegin(); it != path.rend(); ++it) d[*it] = ++base;
  }
  return d;
}

int side_height(const SentenceParse& p, bool left) {
  validate_parse(p);
  auto d = depths(p);
  int best = 0;
  for (std::size_t v = 0; v < p.heads.size(); ++v) {
    if (v == p.root) continue;
    std::size_t a = v;
    while (p.heads[a] != p.root) a = p.heads[a];
    if ((a < p.root) == left) best = std::max(best, d[v]);
  }
  return best;
}

}  // namespace

std::string_view label_name(EntityLabel label) {
  switch (label) {
    case EntityLabel::kPerson: return "PERSON";
    case EntityLabel::kOrg: return "ORG";
    case EntityLabel::kLoc: return "LOC";
    case EntityLabel::kDate: return "DATE";
    case EntityLabel::kNum: return "NUM";
    case EntityLabel::kMisc: return "MISC";
  }
  return "MISC";
}

EntityLabel parse_label(std::string_view name) {
  if (name == "PERSON") return EntityLabel::kPerson;
  if (name == "ORG") return EntityLabel::kOrg;
  if (name == "LOC") return EntityLabel::kLoc;
  if (name == "DATE") return EntityLabel::kDate;
  if (name == "NUM") return EntityLabel::kNum;
  return EntityLabel::kMisc;
}

void validate_parse(const SentenceParse& p) {
  const std::size_t n = p.heads.size();
  auto bad = [](const std::string& why) {
    return Error(ErrorKind::kInvalidInput, "PARSE_INVALID",
                 "invalid dependency parse", why);
  };
  if (n == 0) throw bad("empty parse");
  if (p.root >= n || p.heads[p.root] != p.root) throw bad("root is not its own head");
  for (std::size_t i = 0; i < n; ++i) {
    if (p.heads[i] >= n) throw bad("head index out of range");
    if (i != p.root && p.heads[i] == i) throw bad("second root");
    std::size_t v = i;
    std::size_t steps = 0;
    while (v != p.root) {
      v = p.heads[v];
      if (++steps > n) throw bad("cycle in head graph");
    }
  }
}

int tree_height(const SentenceParse& p) {
  validate_parse(p);
  auto d = depths(p);
  return 1 + *std::max_element(d.begin(), d.end());
}

int left_subtree_height(const SentenceParse& p) { return side_height(p, true); }
int right_subtree_height(const SentenceParse& p) { return side_height(p, false); }

HeuristicLexicons HeuristicLexicons::standard() {
  HeuristicLexicons lex;
  lex.verbs = text::WordList::embedded("verbs.txt");
  lex.determiners = text::WordList::embedded("determiners.txt");
  lex.function_words = text::WordList::embedded("function_words.txt");
  for (const auto& [name, label] : text::embedded_table("gazetteer.tsv")) {
    lex.gazetteer.emplace(to_lower_ascii(name), parse_label(label));
  }
  return lex;
}

HeuristicProvider::HeuristicProvider(HeuristicLexicons lexicons)
    : lex_(std::move(lexicons)) {}

const HeuristicProvider& HeuristicProvider::standard() {
  static const HeuristicProvider instance(HeuristicLexicons::standard());
  return instance;
}

bool HeuristicProvider::is_adjective(std::string_view w) const {
  static constexpr std::string_view kSuffixes[] = {
      "ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish"};
  if (w.size() < 5) return false;
  for (auto s : kSuffixes) {
    if (ends_with(w, s)) return true;
  }
  return false;
}

bool HeuristicProvider::is_noun_like(const Token& t) const {
  return t.is_word && !lex_.determiners.contains(t.lower) &&
         !lex_.function_words.contains(t.lower) && !lex_.verbs.contains(t.lower) &&
         !is_adjective(t.lower);
}

SentenceParse HeuristicProvider::parse_sentence(const TokenizedText& tokens,
                                                const SentenceSpan& s) const {
  const std::size_t n = s.size();
  SentenceParse p;
  if (n == 0) return p;
  p.root = (n - 1) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = tokens.tokens[s.first + i];
    if (t.is_word && lex_.verbs.contains(t.lower)) {
      p.root = i;
      break;
    }
  }
  p.heads.assign(n, p.root);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p.root) continue;
    const auto& t = tokens.tokens[s.first + i];
    bool modifier = t.is_word && (lex_.determiners.contains(t.lower) || is_adjective(t.lower));
    if (!modifier) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (is_noun_like(tokens.tokens[s.first + j])) {
        p.heads[i] = j;
        break;
      }
    }
  }
  return p;
}

std::vector<EntityMention> HeuristicProvider::extract_entities(
    std::string_view text, const TokenizedText& tokens) const {
  std::vector<EntityMention> out;
  const auto& toks = tokens.tokens;
  auto gazetteer_label = [&](const std::string& lower, EntityLabel* label) {
    auto it = lex_.gazetteer.find(lower);
    if (it == lex_.gazetteer.end()) return false;
    *label = it->second;
    return true;
  };

  for (const auto& s : tokens.sentences) {
    std::size_t first_word = s.last;
    for (std::size_t i = s.first; i < s.last; ++i) {
      if (toks[i].is_word) {
        first_word = i;
        break;
      }
    }
    std::size_t i = s.first;
    while (i < s.last) {
      const Token& t = toks[i];
      if (!t.is_word && has_digit(t.surface) &&
          ((t.surface[0] >= '0' && t.surface[0] <= '9') || t.surface[0] == '$' ||
           t.surface[0] == '#')) {
        EntityMention m{t.surface, t.begin, t.end, EntityLabel::kNum};
        bool all_digits = t.surface.size() == 4 &&
                          t.surface.find_first_not_of("0123456789") == std::string::npos;
        if (all_digits) {
          int year = std::stoi(t.surface);
          if (year >= 1000 && year <= 2099) m.label = EntityLabel::kDate;
        }
        out.push_back(std::move(m));
        ++i;
        continue;
      }
      if (!is_capitalized(t)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.last && is_capitalized(toks[j])) ++j;
      std::size_t b = i;
      bool at_start = b == first_word;
      if (at_start && lex_.function_words.contains(toks[b].lower)) {
        ++b;
        at_start = false;
      }
      std::size_t run = j - b;
      bool only_function = true;
      for (std::size_t k = b; k < j; ++k) {
        if (!lex_.function_words.contains(toks[k].lower) && toks[k].lower != "i") {
          only_function = false;
        }
      }
      if (run > 0 && !only_function) {
        std::size_t begin = toks[b].begin;
        std::size_t end = toks[j - 1].end;
        std::string_view slice = text.substr(begin, end - begin);
        if (ends_with(slice, "'s")) end -= 2;
        else if (ends_with(slice, "\xE2\x80\x99s")) end -= 4;
        EntityMention m{std::string(text.substr(begin, end - begin)), begin, end,
                        EntityLabel::kMisc};
        std::string lower = to_lower_ascii(m.text);
        bool known = gazetteer_label(lower, &m.label);
        if (!known && run > 1) {
          std::string head = to_lower_ascii(toks[b].surface);
          if (ends_with(head, "'s")) head.resize(head.size() - 2);
          gazetteer_label(head, &m.label);
        }
        if (!at_start || run > 1 || known) out.push_back(std::move(m));
      }
      i = j;
    }
  }
  return out;
}

AnnotationBundle HeuristicProvider::annotate(std::string_view,
                                             std::string_view text,
                                             const TokenizedText& tokens) const {
  AnnotationBundle b;
  b.provider_id = id();
  b.entities = extract_entities(text, tokens);
  for (const auto& s : tokens.sentences) b.parses.push_back(parse_sentence(tokens, s));
  return b;
}

PrecomputedProvider PrecomputedProvider::parse(std::string_view jsonl) {
  PrecomputedProvider provider;
  std::size_t line_no = 0;
  for (const auto& line : split(jsonl, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto where = "line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidInput, "ANNOTATION_FILE_INVALID",
                  "malformed annotation record", where + ": " + e.what());
    }
    try {
      const auto& ref = rec.at("ref");
      std::string key = ref.contains("summary_id") ? ref.at("summary_id").get<std::string>()
                                                   : ref.at("doc_id").get<std::string>();
      AnnotationBundle bundle;
      bundle.provider_id = "precomputed";
      for (const auto& e : rec.value("entities", nlohmann::json::array())) {
        EntityMention m;
        m.text = e.at("text").get<std::string>();
        m.begin = e.at("span").at(0).get<std::size_t>();
        m.end = e.at("span").at(1).get<std::size_t>();
        m.label = parse_label(e.value("label", "MISC"));
        bundle.entities.push_back(std::move(m));
      }
      if (rec.contains("parses")) {
        for (const auto& p : rec.at("parses")) {
          SentenceParse sp;
          sp.heads = p.at("heads").get<std::vector<std::size_t>>();
          sp.root = p.at("root").get<std::size_t>();
          bundle.parses.push_back(std::move(sp));
        }
      } else {
        bundle.provider_id = "precomputed+heuristic-parse";
      }
      provider.records_[key] = std::move(bundle);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidInput, "ANNOTATION_FILE_INVALID",
                  "malformed annotation record", where + ": " + e.what());
    }
  }
  return provider;
}

PrecomputedProvider PrecomputedProvider::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

AnnotationBundle PrecomputedProvider::annotate(std::string_view ref,
                                               std::string_view text,
                                               const TokenizedText& tokens) const {
  auto it = records_.find(std::string(ref));
  if (it == records_.end()) {
    throw Error(ErrorKind::kUnavailable, "ANNOTATIONS_UNAVAILABLE",
                "annotations unavailable", std::string(ref));
  }
  AnnotationBundle b = it->second;
  for (const auto& m : b.entities) {
    if (m.begin > m.end || m.end > text.size() ||
        text.substr(m.begin, m.end - m.begin) != m.text) {
      throw misaligned(std::string(ref) + ": entity '" + m.text + "' does not match its span");
    }
  }
  if (b.provider_id == "precomputed+heuristic-parse") {
    for (const auto& s : tokens.sentences) {
      b.parses.push_back(HeuristicProvider::standard().parse_sentence(tokens, s));
    }
    return b;
  }
  if (b.parses.size() != tokens.sentence_count()) {
    throw misaligned(std::string(ref) + ": " + std::to_string(b.parses.size()) +
                     " parses for " + std::to_string(tokens.sentence_count()) + " sentences");
  }
  for (std::size_t i = 0; i < b.parses.size(); ++i) {
    if (b.parses[i].token_count() != tokens.sentences[i].size()) {
      throw misaligned(std::string(ref) + ": parse " + std::to_string(i) +
                       " token count differs from sentence");
    }
    try {
      validate_parse(b.parses[i]);
    } catch (const Error& e) {
      throw misaligned(std::string(ref) + ": " + e.detail());
    }
  }
  return b;
}

}  // namespace promptscope::annotate
