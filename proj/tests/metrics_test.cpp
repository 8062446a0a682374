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
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "promptscope/common/error.hpp"
#include "promptscope/metrics/levels.hpp"
#include "promptscope/metrics/metrics.hpp"
#include "promptscope/text/stemmer.hpp"

namespace promptscope::metrics {
namespace {

using text::tokenize;

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

TEST(Complexity, Examples) {
  EXPECT_DOUBLE_EQ(complexity(tokenize("The cat sat.")), 0.0);
  // 9 words, 1 sentence, syllables: the1 un2 i3 ver1 si1 ty1 ... counted by hand:
  // "Institutional investigators scrutinized unprecedented administrative irregularities."
  // in1 sti1 tu1 tion1 al1 =5; in vest i ga tors =5; scru ti nized =3;
  // un pre ce dent ed =5; ad min is tra tive =5; ir reg u lar i ties =6 -> 29
  auto t = tokenize("Institutional investigators scrutinized unprecedented administrative irregularities.");
  double r = 206.835 - 1.015 * 6.0 - 84.6 * (29.0 / 6.0);
  double expect = 100.0 - std::clamp(r, 0.0, 100.0);
  EXPECT_NEAR(complexity(t), expect, 1e-9);
  EXPECT_EQ(categorize(Feature::kComplexity, 95), "Professional");
  EXPECT_EQ(categorize(Feature::kComplexity, 25), "Middle School");
}

TEST(Complexity, EmptyThrows) {
  try {
    complexity(tokenize(""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no words");
  }
  EXPECT_THROW(formality_mtld(tokenize("!!")), Error);
}

// Hand traces: (tokens, expected factor count of the forward pass).
// a a a a: TTR 1, .5 -> factor; 1, .5 -> factor; remainder empty -> 2.
// a b c d: TTR stays 1 -> 0 full, partial (1-1)/.28 = 0.
// a b a: 1, 1, 2/3 <= .72 -> factor -> 1.
// a b a c: factor at token 3, remainder {c} TTR 1 -> 1.
// a b c a: 1,1,1, 3/4=.75 -> no factor; partial (1-.75)/.28.
// a b c a b: .75 then 3/5=.6 -> factor -> 1.
// a a b: .5 -> factor; remainder {b} -> 1.
// a b c d a b c d: TTR ... 4/5=.8, 4/6=.667 -> factor at 6; remainder c d -> 1.
// x: partial 0.
// a b c d e a b c d e f: 5/6=.833,5/7=.714 -> factor at 7, remainder c d e f -> 1.
TEST(Mtld, HandTracedForwardPasses) {
  const std::vector<std::pair<std::string, double>> cases = {
      {"a a a a", 2.0},
      {"a b c d", 0.0},
      {"a b a", 1.0},
      {"a b a c", 1.0},
      {"a b c a", (1.0 - 0.75) / 0.28},
      {"a b c a b", 1.0},
      {"a a b", 1.0},
      {"a b c d a b c d", 1.0},
      {"x", 0.0},
      {"a b c d e a b c d e f", 1.0},
  };
  for (const auto& [text, factors] : cases) {
    EXPECT_NEAR(mtld_factor_count(split_ws(text)), factors, 1e-12) << text;
  }
}

TEST(Mtld, Bidirectional) {
  EXPECT_DOUBLE_EQ(formality_mtld(tokenize("a a a a")), 2.0);
  EXPECT_DOUBLE_EQ(
      formality_mtld(tokenize("one two three four five six seven eight nine ten")), 10.0);
  // "a b c a": forward partial .25/.28, backward "a c b a" partial .25/.28.
  EXPECT_NEAR(formality_mtld(tokenize("a b c a")), 4.0 / (0.25 / 0.28), 1e-9);
  EXPECT_EQ(categorize(Feature::kFormality, 150), "Formal");
}

TEST(Mtld, UsesStems) {
  // "cats cat" -> stems cat cat -> factor at token 2.
  EXPECT_DOUBLE_EQ(formality_mtld(tokenize("cats cat")), 2.0);
}

// Oracle implementation with floating-point TTR and explicit reversal.
double mtld_oracle(const std::vector<std::string>& toks) {
  auto pass = [](const std::vector<std::string>& seq) {
    double f = 0;
    std::set<std::string> seen;
    int n = 0;
    for (const auto& t : seq) {
      seen.insert(t);
      ++n;
      if (double(seen.size()) / n <= 0.72 + 1e-12) {
        f += 1;
        seen.clear();
        n = 0;
      }
    }
    if (n > 0) f += (1.0 - double(seen.size()) / n) / 0.28;
    return f;
  };
  auto rev = std::vector<std::string>(toks.rbegin(), toks.rend());
  double mean = (pass(toks) + pass(rev)) / 2;
  return mean > 0 ? double(toks.size()) / mean : double(toks.size());
}

TEST(Mtld, PropertyMatchesOracle) {
  std::mt19937 rng(17);
  for (int iter = 0; iter < 1000; ++iter) {
    std::string s;
    int n = 1 + int(rng() % 30);
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) {
      std::string w(1, char('a' + rng() % 6));
      w += "zz";
      words.push_back(w);
      s += w + " ";
    }
    std::vector<std::string> stems;
    for (auto& w : words) stems.push_back(text::stem(w));
    ASSERT_NEAR(formality_mtld(tokenize(s)), mtld_oracle(stems), 1e-9) << s;
  }
}

TEST(Sentiment, Examples) {
  EXPECT_DOUBLE_EQ(sentiment(tokenize("The cat sat on the mat.")), 0.0);
  EXPECT_NEAR(sentiment(tokenize("not good")), -0.17575, 1e-12);
  EXPECT_NEAR(sentiment(tokenize("good")), 0.475, 1e-12);
  EXPECT_NEAR(sentiment(tokenize("very good")), 0.475 * 1.29 / 2, 1e-12);
  EXPECT_NEAR(sentiment(tokenize("GOOD day")), 0.475 * 1.15 / 2, 1e-12);
  EXPECT_NEAR(sentiment(tokenize("A good day!")), 0.475 * 1.09 / 3, 1e-12);
  // Negation more than three words back does not apply.
  EXPECT_NEAR(sentiment(tokenize("not one two three good")), 0.475 / 5, 1e-12);
  // Negation does not cross sentences.
  EXPECT_NEAR(sentiment(tokenize("Not. Good.")), 0.475 / 2, 1e-12);
  // Booster arms only the next hit.
  EXPECT_NEAR(sentiment(tokenize("very good good")), (0.475 * 1.29 + 0.475) / 3, 1e-12);
  EXPECT_EQ(categorize(Feature::kSentiment, 0.45), "Positive");
  EXPECT_EQ(categorize(Feature::kSentiment, -0.1), "Neutral");
  EXPECT_EQ(categorize(Feature::kSentiment, 0.0), "Neutral");
}

TEST(Sentiment, LexiconUnavailable) {
  try {
    SentimentLexicon::load("/nonexistent/lexicon.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "lexicon unavailable");
  }
}

TEST(Sentiment, CustomLexiconAndConfig) {
  SentimentLexicon lex({{"meh", -2.0}}, text::WordList::parse("very"),
                       text::WordList::parse("not"));
  SentimentConfig cfg;
  cfg.negation_scalar = -1.0;
  EXPECT_NEAR(sentiment(tokenize("not meh"), lex, cfg), 0.5 / 2, 1e-12);
}

TEST(Faithfulness, WorkedExample) {
  std::vector<std::string> article{"Alice", "Paris", "Alice", "Bob",  "UN",
                                   "2020",  "Paris", "Alice", "alice"};
  std::vector<std::string> summary{"Alice", "Paris"};
  auto tr = faithfulness_trace(article, summary);
  EXPECT_EQ(tr.article_unique,
            (std::vector<std::string>{"Alice", "Paris", "Bob", "UN", "2020"}));
  EXPECT_EQ(tr.top.size(), 5u);
  EXPECT_EQ(tr.matches, 2u);
  EXPECT_DOUBLE_EQ(tr.score, 0.4);
  EXPECT_EQ(categorize(Feature::kFaithfulness, tr.score), "Avg");
  EXPECT_DOUBLE_EQ(faithfulness({}, {"Alice"}), 1.0);
  EXPECT_EQ(categorize(Feature::kFaithfulness, 0.7), "Good");
  EXPECT_EQ(categorize(Feature::kFaithfulness, 0.3), "Low");
}

TEST(Faithfulness, Branches) {
  // |U_s| = 0 -> T = U_a, no matches.
  EXPECT_DOUBLE_EQ(faithfulness({"Alice", "Bob"}, {}), 0.0);
  // |U_a| < |U_s| -> T = U_a.
  EXPECT_DOUBLE_EQ(faithfulness({"Alice"}, {"Alice", "Bob", "Carol"}), 1.0);
  // else T = top |U_s|: U_a ranked Alice(2), Bob, Carol; U_s = {Bob} -> T = {Alice}.
  EXPECT_DOUBLE_EQ(faithfulness({"Alice", "Bob", "Alice", "Carol"}, {"Bob"}), 0.0);
}

TEST(Faithfulness, PropertyRangeAndCaseInvariance) {
  std::mt19937 rng(23);
  const std::vector<std::string> pool{"Alice", "Alicia", "Bob", "Paris", "UN",
                                      "Obama", "Barack Obama", "2020", "Acme Corp"};
  auto upper = [](std::string s) {
    for (auto& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::string> a, s, a_up, s_up;
    for (int i = int(rng() % 10); i > 0; --i) a.push_back(pool[rng() % pool.size()]);
    for (int i = int(rng() % 6); i > 0; --i) s.push_back(pool[rng() % pool.size()]);
    for (auto& x : a) a_up.push_back(upper(x));
    for (auto& x : s) s_up.push_back(upper(x));
    double f = faithfulness(a, s);
    ASSERT_GE(f, 0.0);
    ASSERT_LE(f, 1.0);
    ASSERT_DOUBLE_EQ(f, faithfulness(a_up, s_up));
  }
}

TEST(Naturalness, Features) {
  annotate::SentenceParse single{{0}, 0};
  EXPECT_EQ(naturalness_features({single}), (NaturalnessFeatures{0, 0, 1, 1}));
  annotate::SentenceParse chain{{1, 2, 2}, 2};
  EXPECT_EQ(naturalness_features({chain}), (NaturalnessFeatures{2, 0, 3, 3}));
  annotate::SentenceParse h5{{1, 2, 3, 4, 4}, 4};
  EXPECT_DOUBLE_EQ(naturalness_features({chain, h5})[2], 4.0);
  EXPECT_THROW(naturalness_features({}), Error);
}

TEST(Naturalness, ScaleEndpointsAndMonotonicity) {
  std::vector<double> raws{2.0, 3.5, 5.0, 4.0};
  auto scale = NaturalnessScale::fit(raws);
  EXPECT_DOUBLE_EQ(scale.score(2.0), 1.0);
  EXPECT_DOUBLE_EQ(scale.score(5.0), 0.0);
  EXPECT_DOUBLE_EQ(scale.score(9.0), 0.0);   // later run beyond frozen max
  EXPECT_DOUBLE_EQ(scale.score(-1.0), 1.0);
  EXPECT_GT(scale.score(3.0), scale.score(3.5));
  EXPECT_DOUBLE_EQ(NaturalnessScale::fit({3.0, 3.0}).score(3.0), 0.5);
  EXPECT_THROW(NaturalnessScale::fit({}), Error);
  EXPECT_EQ(categorize(Feature::kNaturalness, 0.65), "Avg");
  NaturalnessWeights w;
  EXPECT_DOUBLE_EQ(naturalness_raw({2, 0, 3, 3}, w), 2.0);
  w.w = {0.5, 0.5, 0.5, 0.0};
  EXPECT_THROW(w.validate(), Error);
}

TEST(Length, Levels) {
  EXPECT_EQ(length(tokenize("")), 0u);
  EXPECT_EQ(categorize(Feature::kLength, 0), "Short");
  EXPECT_EQ(categorize(Feature::kLength, 99), "Short");
  EXPECT_EQ(categorize(Feature::kLength, 100), "Mid");
  EXPECT_EQ(categorize(Feature::kLength, 512), "Very Long");
}

TEST(Levels, PropertyTotalAndUnique) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> d(-1000, 1000);
  for (auto f : kAllFeatures) {
    for (int i = 0; i < 2000; ++i) {
      double x = i < 10 ? std::vector<double>{-1, 0, 0.3, -0.3, 10, 40, 0.25, 0.435, 100, 500}[i]
                        : d(rng);
      auto level = categorize(f, x);
      int containing = 0;
      for (const auto& name : level_names(f)) {
        auto r = level_range(f, name);
        bool first = name == level_names(f).front();
        if ((x >= r.lower || first) && x < r.upper) ++containing;
      }
      ASSERT_EQ(containing, 1) << feature_name(f) << " " << x;
      auto r = level_range(f, level);
      ASSERT_LT(x, r.upper);
    }
  }
}

TEST(Levels, InvalidLevelListsLegalOnes) {
  try {
    level_range(Feature::kComplexity, "Medium");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "INVALID_LEVEL");
    EXPECT_NE(e.detail().find("Elementary"), std::string::npos);
  }
}

TEST(FeatureVector, ComponentwiseAndDeterministic) {
  TextRef article{"d1", "Alice met Bob in Paris in 2020. Alice was happy. Bob left Paris."};
  TextRef summary{"r1:d1", "Alice met Bob in Paris. It was great!"};
  auto v = build_feature_vector(summary, article);
  auto st = tokenize(summary.text);
  EXPECT_DOUBLE_EQ(v.complexity, complexity(st));
  EXPECT_DOUBLE_EQ(v.formality, formality_mtld(st));
  EXPECT_DOUBLE_EQ(v.sentiment, sentiment(st));
  EXPECT_EQ(v.length, 8u);
  EXPECT_DOUBLE_EQ(v.faithfulness,
                   faithfulness({"Alice", "Bob", "Paris", "2020", "Alice", "Bob", "Paris"},
                                {"Alice", "Bob", "Paris"}));
  EXPECT_TRUE(v.pending());
  EXPECT_THROW(v.value(Feature::kNaturalness), Error);
  auto again = build_feature_vector(summary, article);
  EXPECT_EQ(again.naturalness_raw, v.naturalness_raw);
  EXPECT_EQ(again.naturalness_features, v.naturalness_features);
}

TEST(FeatureVector, EmptySummaryNamesFeatures) {
  try {
    build_feature_vector({"s", ""}, {"d", "Alice left."});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "FEATURE_ERRORS");
    EXPECT_NE(e.detail().find("complexity: no words"), std::string::npos);
    EXPECT_NE(e.detail().find("formality: no words"), std::string::npos);
  }
}

TEST(FeatureVector, PropertyScoresInRange) {
  std::mt19937 rng(31);
  const std::vector<std::string> vocab{"The", "cat", "good", "terrible", "Paris", "NOT",
                                       "very", "!", ".", "extraordinarily", "Alice", "2020",
                                       "happy", "sad", "sat", "never", ","};
  for (int iter = 0; iter < 300; ++iter) {
    std::string s;
    int n = 1 + int(rng() % 25);
    for (int i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
    s += "word.";
    auto v = build_feature_vector({"s", s}, {"d", "Alice met Bob in Paris in 2020."});
    ASSERT_GE(v.complexity, 0);
    ASSERT_LE(v.complexity, 100);
    ASSERT_GE(v.formality, 0);
    ASSERT_GE(v.sentiment, -1);
    ASSERT_LE(v.sentiment, 1);
    ASSERT_GE(v.faithfulness, 0);
    ASSERT_LE(v.faithfulness, 1);
    ASSERT_GE(v.naturalness_raw, 0);
  }
}

TEST(Config, JsonRoundTrip) {
  MetricConfig c;
  c.epsilon = 0.8;
  c.naturalness.w = {0.1, 0.2, 0.3, 0.4};
  auto back = MetricConfig::from_json(c.to_json());
  EXPECT_DOUBLE_EQ(back.epsilon, 0.8);
  EXPECT_EQ(back.naturalness.w, c.naturalness.w);
  EXPECT_THROW(MetricConfig::from_json({{"epsilon", 0}}), Error);
}

}  // namespace
}  // namespace promptscope::metrics
