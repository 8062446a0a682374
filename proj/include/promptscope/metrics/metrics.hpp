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
#ifndef PROMPTSCOPE_METRICS_METRICS_HPP_
#define PROMPTSCOPE_METRICS_METRICS_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/annotate/annotation.hpp"
#include "promptscope/metrics/levels.hpp"
#include "promptscope/text/syllables.hpp"
#include "promptscope/text/tokenizer.hpp"
#include "promptscope/text/word_list.hpp"

namespace promptscope::metrics {

// 100 - clamp(reading ease, 0, 100). Throws Error(NO_WORDS) on empty text.
double complexity(const text::TokenizedText& text,
                  const text::SyllableCounter& syllables = text::SyllableCounter::standard());

inline constexpr double kMtldThreshold = 0.72;

// Full plus partial factors of one directional pass over a token sequence.
double mtld_factor_count(const std::vector<std::string>& tokens);
// Bidirectional MTLD over stemmed words. Throws Error(NO_WORDS) on empty text.
double formality_mtld(const text::TokenizedText& text);

struct SentimentConfig {
  double negation_scalar = -0.74;
  int negation_window = 3;
  double booster_scalar = 1.29;
  double caps_scalar = 1.15;
  double exclaim_scalar = 1.09;
};

class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  SentimentLexicon(std::unordered_map<std::string, double> valences,
                   text::WordList boosters, text::WordList negations);

  static const SentimentLexicon& standard();
  // Reads a term<TAB>valence file; boosters and negations use the shipped
  // lists. Throws Error(LEXICON_UNAVAILABLE).
  static SentimentLexicon load(const std::filesystem::path& path);

  std::optional<double> valence(const std::string& lower) const;
  bool is_booster(const std::string& lower) const { return boosters_.contains(lower); }
  bool is_negation(const std::string& lower) const { return negations_.contains(lower); }

 private:
  std::unordered_map<std::string, double> valences_;
  text::WordList boosters_;
  text::WordList negations_;
};

double sentiment(const text::TokenizedText& text,
                 const SentimentLexicon& lexicon = SentimentLexicon::standard(),
                 const SentimentConfig& config = {});

inline constexpr double kDefaultEpsilon = 0.7;

struct FaithfulnessTrace {
  std::vector<std::string> article_unique;  // sorted by fuzzy occurrence
  std::vector<std::string> summary_unique;
  std::vector<std::string> top;
  std::size_t matches = 0;
  double score = 1.0;
};

FaithfulnessTrace faithfulness_trace(const std::vector<std::string>& article_mentions,
                                     const std::vector<std::string>& summary_mentions,
                                     double epsilon = kDefaultEpsilon);
double faithfulness(const std::vector<std::string>& article_mentions,
                    const std::vector<std::string>& summary_mentions,
                    double epsilon = kDefaultEpsilon);

// (avg left subtree height, avg right subtree height, avg tree height,
//  avg sentence length in tokens)
using NaturalnessFeatures = std::array<double, 4>;
NaturalnessFeatures naturalness_features(const std::vector<annotate::SentenceParse>& parses);

struct NaturalnessWeights {
  std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
  // Throws Error(INVALID_WEIGHTS) unless nonnegative and summing to 1.
  void validate() const;
};

double naturalness_raw(const NaturalnessFeatures& features, const NaturalnessWeights& weights);

struct NaturalnessScale {
  double min = 0.0;
  double max = 0.0;

  // Throws Error(EMPTY_CORPUS) when raws is empty.
  static NaturalnessScale fit(const std::vector<double>& raws);
  double score(double raw) const;
};

std::size_t length(const text::TokenizedText& text);

struct MetricConfig {
  double epsilon = kDefaultEpsilon;
  SentimentConfig sentiment;
  NaturalnessWeights naturalness;

  static MetricConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct FeatureScores {
  double complexity = 0;
  double formality = 0;
  double sentiment = 0;
  double faithfulness = 0;
  double naturalness_raw = 0;
  std::optional<double> naturalness;  // empty until the corpus pass
  std::size_t length = 0;
  NaturalnessFeatures naturalness_features{};

  bool pending() const { return !naturalness.has_value(); }
  // Throws Error(NATURALNESS_PENDING) for naturalness before normalization.
  double value(Feature f) const;
  std::array<double, kFeatureCount> values() const;
};

using FeatureLevels = std::array<std::string, kFeatureCount>;
FeatureLevels categorize_all(const FeatureScores& scores);

struct MetricContext {
  const text::Tokenizer* tokenizer = &text::Tokenizer::standard();
  const text::SyllableCounter* syllables = &text::SyllableCounter::standard();
  const SentimentLexicon* lexicon = &SentimentLexicon::standard();
  const annotate::AnnotationProvider* annotations = &annotate::HeuristicProvider::standard();
  MetricConfig config;
};

struct TextRef {
  std::string id;  // doc id or summary id, used by precomputed annotations
  std::string text;
};

// Throws Error(FEATURE_ERRORS) whose detail lists "feature: message" lines.
FeatureScores build_feature_vector(const TextRef& summary, const TextRef& article,
                                   const MetricContext& ctx = {});

}  // namespace promptscope::metrics

#endif  // PROMPTSCOPE_METRICS_METRICS_HPP_
