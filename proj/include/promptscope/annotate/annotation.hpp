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
#ifndef PROMPTSCOPE_ANNOTATE_ANNOTATION_HPP_
#define PROMPTSCOPE_ANNOTATE_ANNOTATION_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "promptscope/text/tokenizer.hpp"
#include "promptscope/text/word_list.hpp"

namespace promptscope::annotate {

enum class EntityLabel { kPerson, kOrg, kLoc, kDate, kNum, kMisc };

std::string_view label_name(EntityLabel label);
EntityLabel parse_label(std::string_view name);  // unknown names map to MISC

struct EntityMention {
  std::string text;
  std::size_t begin = 0;  // byte range in the source text
  std::size_t end = 0;
  EntityLabel label = EntityLabel::kMisc;
};

struct SentenceParse {
  std::vector<std::size_t> heads;  // the root is its own head
  std::size_t root = 0;

  std::size_t token_count() const { return heads.size(); }
};

// Throws Error(PARSE_INVALID) unless the parse is a single rooted tree.
void validate_parse(const SentenceParse& parse);

// Tree heights count nodes, so a lone root has height 1. Left and right
// heights are the tallest subtree hanging off the root on that side (0 when
// there is none).
int tree_height(const SentenceParse& parse);
int left_subtree_height(const SentenceParse& parse);
int right_subtree_height(const SentenceParse& parse);

struct AnnotationBundle {
  std::vector<EntityMention> entities;
  std::vector<SentenceParse> parses;  // one per tokenizer sentence
  std::string provider_id;
};

class AnnotationProvider {
 public:
  virtual ~AnnotationProvider() = default;
  virtual std::string id() const = 0;
  // ref is the document id for articles and the summary id for summaries.
  virtual AnnotationBundle annotate(std::string_view ref, std::string_view text,
                                    const text::TokenizedText& tokens) const = 0;
};

struct HeuristicLexicons {
  text::WordList verbs;
  text::WordList determiners;
  text::WordList function_words;
  std::unordered_map<std::string, EntityLabel> gazetteer;  // lowercase keys

  static HeuristicLexicons standard();
};

class HeuristicProvider : public AnnotationProvider {
 public:
  explicit HeuristicProvider(HeuristicLexicons lexicons);
  static const HeuristicProvider& standard();

  std::string id() const override { return "heuristic"; }
  AnnotationBundle annotate(std::string_view ref, std::string_view text,
                            const text::TokenizedText& tokens) const override;

  std::vector<EntityMention> extract_entities(
      std::string_view text, const text::TokenizedText& tokens) const;
  SentenceParse parse_sentence(const text::TokenizedText& tokens,
                               const text::SentenceSpan& sentence) const;

 private:
  bool is_adjective(std::string_view lower) const;
  bool is_noun_like(const text::Token& token) const;

  HeuristicLexicons lex_;
};

class PrecomputedProvider : public AnnotationProvider {
 public:
  static PrecomputedProvider parse(std::string_view jsonl);
  static PrecomputedProvider load(const std::filesystem::path& path);

  std::string id() const override { return "precomputed"; }
  AnnotationBundle annotate(std::string_view ref, std::string_view text,
                            const text::TokenizedText& tokens) const override;

  std::size_t size() const { return records_.size(); }

 private:
  std::unordered_map<std::string, AnnotationBundle> records_;
};

}  // namespace promptscope::annotate

#endif  // PROMPTSCOPE_ANNOTATE_ANNOTATION_HPP_
