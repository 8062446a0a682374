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
#include <functional>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "promptscope/annotate/annotation.hpp"
#include "promptscope/annotate/fuzzy.hpp"
#include "promptscope/common/error.hpp"

namespace promptscope::annotate {
namespace {

std::vector<std::string> texts(const std::vector<EntityMention>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(m.text);
  return out;
}

// Plain recursive edit distance over bytes, used on ASCII inputs only.
std::size_t edit_oracle(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min(go(i + 1, j), go(i, j + 1)) + 1;
    best = std::min(best, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1));
    return memo[key] = best;
  };
  return go(0, 0);
}

TEST(Fuzzy, Examples) {
  EXPECT_DOUBLE_EQ(fuzzy_ratio("Obama", "obama"), 1.0);
  EXPECT_NEAR(fuzzy_ratio("Barack Obama", "Barak Obama"), 11.0 / 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(fuzzy_ratio("", "x"), 0.0);
  EXPECT_DOUBLE_EQ(fuzzy_ratio("", ""), 1.0);
  EXPECT_DOUBLE_EQ(fuzzy_ratio("  New   York ", "new york"), 1.0);
  EXPECT_DOUBLE_EQ(fuzzy_ratio("Obama", "Paris"), 0.0);  // distance 5 of 5
}

TEST(Fuzzy, CodePointsNotBytes) {
  // One substituted code point out of four.
  EXPECT_NEAR(fuzzy_ratio("caf\xC3\xA9", "cafe"), 0.75, 1e-12);
}

TEST(Fuzzy, PropertyMatchesOracleAndIsSymmetric) {
  std::mt19937 rng(5);
  const std::string alphabet = "abcAB ";
  for (int iter = 0; iter < 1500; ++iter) {
    auto gen = [&] {
      std::string s;
      int len = static_cast<int>(rng() % 9);
      for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
      return s;
    };
    std::string a = gen(), b = gen();
    double r = fuzzy_ratio(a, b);
    ASSERT_DOUBLE_EQ(r, fuzzy_ratio(b, a));
    ASSERT_GE(r, 0.0);
    ASSERT_LE(r, 1.0);
    // Independent normalization for the oracle.
    auto norm = [](std::string s) {
      std::string out;
      for (char c : s) {
        if (c == ' ') {
          if (!out.empty() && out.back() != ' ') out.push_back(' ');
        } else {
          out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      return out;
    };
    auto na = norm(a), nb = norm(b);
    std::size_t longest = std::max(na.size(), nb.size());
    double expect = longest == 0 ? 1.0 : 1.0 - double(edit_oracle(na, nb)) / double(longest);
    ASSERT_NEAR(r, expect, 1e-12) << a << "|" << b;
    ASSERT_EQ(r == 1.0, na == nb);
  }
}

TEST(Disambiguation, SimilarityMatrix) {
  auto s = similar_entities({"Obama", "Obama"}, 0.7);
  EXPECT_EQ(s, (SimilarityMatrix{{1, 1}, {1, 1}}));
  s = similar_entities({"Obama", "Paris"}, 0.7);
  EXPECT_EQ(s, (SimilarityMatrix{{1, 0}, {0, 1}}));
  EXPECT_TRUE(similar_entities({}, 0.7).empty());
}

TEST(Disambiguation, Groups) {
  std::vector<std::string> e{"Barack Obama", "Obama", "Paris"};
  SimilarityMatrix s{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  auto g = disjoint_entity_sets(s, e);
  ASSERT_EQ(g.members.size(), 2u);
  EXPECT_EQ(g.members[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(g.representatives, (std::vector<std::string>{"Barack Obama", "Paris"}));

  SimilarityMatrix id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(disjoint_entity_sets(id, e).members.size(), 3u);

  SimilarityMatrix chain{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
  EXPECT_EQ(disjoint_entity_sets(chain, {"a", "b", "c"}).members.size(), 1u);
}

TEST(Disambiguation, RepresentativeTieBreaksLexicographically) {
  SimilarityMatrix s{{1, 1}, {1, 1}};
  auto g = disjoint_entity_sets(s, {"Bbb", "Abb"});
  EXPECT_EQ(g.representatives[0], "Abb");
}

TEST(Disambiguation, PropertyGroupsPartitionAndMatchReachability) {
  std::mt19937 rng(9);
  for (int iter = 0; iter < 500; ++iter) {
    std::size_t n = rng() % 9;
    SimilarityMatrix s(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      s[i][i] = 1;
      for (std::size_t j = i + 1; j < n; ++j) s[i][j] = s[j][i] = (rng() % 4 == 0);
    }
    std::vector<std::string> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(std::string(1 + rng() % 4, 'a' + char(i)));
    auto g = disjoint_entity_sets(s, e);
    std::vector<int> owner(n, -1);
    for (std::size_t k = 0; k < g.members.size(); ++k) {
      for (auto m : g.members[k]) {
        ASSERT_EQ(owner[m], -1);
        owner[m] = int(k);
      }
    }
    for (auto o : owner) ASSERT_GE(o, 0);
    // Reachability by Floyd-Warshall closure.
    auto r = s;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (r[i][k] && r[k][j]) r[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(bool(r[i][j]), owner[i] == owner[j]);
  }
}

TEST(HeuristicEntities, Examples) {
  const auto& p = HeuristicProvider::standard();
  std::string a = "Alice met Bob in Paris in 2020.";
  auto ents = p.extract_entities(a, text::tokenize(a));
  EXPECT_EQ(texts(ents), (std::vector<std::string>{"Alice", "Bob", "Paris", "2020"}));
  EXPECT_EQ(ents[0].label, EntityLabel::kPerson);
  EXPECT_EQ(ents[2].label, EntityLabel::kLoc);
  EXPECT_EQ(ents[3].label, EntityLabel::kDate);
  std::string b = "the cat sat.";
  EXPECT_TRUE(p.extract_entities(b, text::tokenize(b)).empty());
}

TEST(HeuristicEntities, SentenceStartRules) {
  const auto& p = HeuristicProvider::standard();
  std::string t = "Yesterday it rained. The United Nations met. I left. Barack Obama's aide paid $40.";
  auto ents = p.extract_entities(t, text::tokenize(t));
  EXPECT_EQ(texts(ents),
            (std::vector<std::string>{"United Nations", "Barack Obama", "$40"}));
  for (const auto& m : ents) EXPECT_EQ(t.substr(m.begin, m.end - m.begin), m.text);
}

TEST(HeuristicParse, Examples) {
  const auto& p = HeuristicProvider::standard();
  auto single = text::tokenize("Hello");
  auto sp = p.parse_sentence(single, single.sentences[0]);
  EXPECT_EQ(sp.root, 0u);
  EXPECT_EQ(tree_height(sp), 1);

  auto cat = text::tokenize("the cat sat");
  sp = p.parse_sentence(cat, cat.sentences[0]);
  EXPECT_EQ(sp.root, 2u);
  EXPECT_EQ(sp.heads, (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(tree_height(sp), 3);
  EXPECT_EQ(left_subtree_height(sp), 2);
  EXPECT_EQ(right_subtree_height(sp), 0);
}

TEST(HeuristicParse, PropertyAlwaysValid) {
  const auto& p = HeuristicProvider::standard();
  std::mt19937 rng(21);
  const std::vector<std::string> vocab{"the", "a", "famous", "cat", "sat", "on",
                                       "mat", "careful", "dog", ",", "ran", "big"};
  for (int iter = 0; iter < 1000; ++iter) {
    std::string s;
    int n = 1 + int(rng() % 12);
    for (int i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
    auto t = text::tokenize(s);
    for (const auto& span : t.sentences) {
      auto parse = p.parse_sentence(t, span);
      ASSERT_EQ(parse.token_count(), span.size());
      ASSERT_NO_THROW(validate_parse(parse)) << s;
      ASSERT_GE(tree_height(parse), 1);
    }
  }
}

TEST(Parse, ValidatorRejectsBadTrees) {
  EXPECT_THROW(validate_parse({{0, 0}, 1}), Error);      // root not self-headed
  EXPECT_THROW(validate_parse({{0, 1}, 0}), Error);      // two roots
  EXPECT_THROW(validate_parse({{0, 2, 1}, 0}), Error);   // cycle
  EXPECT_THROW(validate_parse({{0, 5}, 0}), Error);      // out of range
  EXPECT_NO_THROW(validate_parse({{1, 1, 1}, 1}));
  EXPECT_EQ(tree_height({{1, 1, 1}, 1}), 2);
}

TEST(Precomputed, PassThroughAndErrors) {
  std::string text = "Delegates UN met. They left.";
  auto tokens = text::tokenize(text);
  auto provider = PrecomputedProvider::parse(
      R"({"ref":{"doc_id":"d1"},"entities":[{"text":"UN","span":[10,12],"label":"ORG"}]})"
      "\n"
      R"({"ref":{"summary_id":"r1:d1"},"entities":[],"parses":[{"heads":[1,1,1,1],"root":1},{"heads":[1,1,1],"root":1}]})"
      "\n"
      R"({"ref":{"doc_id":"bad"},"entities":[{"text":"Delegates","span":[0,3]}]})"
      "\n"
      R"({"ref":{"doc_id":"short"},"entities":[],"parses":[{"heads":[0],"root":0}]})");
  EXPECT_EQ(provider.size(), 4u);
  auto b = provider.annotate("d1", text, tokens);
  ASSERT_EQ(b.entities.size(), 1u);
  EXPECT_EQ(b.entities[0].text, "UN");
  EXPECT_EQ(b.entities[0].label, EntityLabel::kOrg);
  EXPECT_EQ(b.parses.size(), 2u);

  auto s = provider.annotate("r1:d1", text, tokens);
  EXPECT_EQ(s.parses[0].heads, (std::vector<std::size_t>{1, 1, 1, 1}));

  try {
    provider.annotate("missing", text, tokens);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "annotations unavailable");
  }
  for (const char* ref : {"bad", "short"}) {
    try {
      provider.annotate(ref, text, tokens);
      FAIL() << ref;
    } catch (const Error& e) {
      EXPECT_STREQ(e.what(), "annotation misaligned");
    }
  }
}

}  // namespace
}  // namespace promptscope::annotate
