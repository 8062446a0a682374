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
#include "promptscope/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "promptscope/annotate/fuzzy.hpp"
#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/text/embedded_resources.hpp"
#include "promptscope/text/stemmer.hpp"

namespace promptscope::metrics {
namespace {

Error no_words() {
  return Error(ErrorKind::kInvalidInput, "NO_WORDS", "no words");
}

bool all_caps(const std::string& surface) {
  int letters = 0;
  for (char c : surface) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') ++letters;
  }
  return letters >= 2;
}

bool ends_with_exclaim(const text::TokenizedText& t, const text::SentenceSpan& s) {
  for (std::size_t i = s.last; i > s.first; --i) {
    const auto& surf = t.tokens[i - 1].surface;
    if (surf.find_first_not_of(".!?") == std::string::npos) {
      return surf.find('!') != std::string::npos;
    }
  }
  return false;
}

std::unordered_map<std::string, double> parse_valences(std::string_view contents) {
  std::unordered_map<std::string, double> out;
  for (const auto& [term, value] : text::parse_table(contents)) {
    out[term] = std::strtod(value.c_str(), nullptr);
  }
  return out;
}

}  // namespace

double complexity(const text::TokenizedText& t, const text::SyllableCounter& syl) {
  if (t.word_count == 0 || t.sentence_count() == 0) throw no_words();
  double syllables = 0;
  for (const auto& tok : t.tokens) {
    if (tok.is_word) syllables += syl.count(tok.surface);
  }
  double w = static_cast<double>(t.word_count);
  double r = 206.835 - 1.015 * (w / static_cast<double>(t.sentence_count())) -
             84.6 * (syllables / w);
  r = std::clamp(r, 0.0, 100.0);
  return 100.0 - r;
}

double mtld_factor_count(const std::vector<std::string>& tokens) {
  double factors = 0;
  std::unordered_set<std::string> types;
  std::size_t count = 0;
  for (const auto& tok : tokens) {
    types.insert(tok);
    ++count;
    // types / count <= 0.72, compared exactly.
    if (types.size() * 100 <= 72 * count) {
      factors += 1;
      types.clear();
      count = 0;
    }
  }
  if (count > 0) {
    double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
    factors += (1.0 - ttr) / (1.0 - kMtldThreshold);
  }
  return factors;
}

double formality_mtld(const text::TokenizedText& t) {
  if (t.word_count == 0) throw no_words();
  std::vector<std::string> stems;
  stems.reserve(t.word_count);
  for (const auto& w : t.words()) stems.push_back(text::stem(w));
  double forward = mtld_factor_count(stems);
  std::reverse(stems.begin(), stems.end());
  double backward = mtld_factor_count(stems);
  double mean = (forward + backward) / 2.0;
  double w = static_cast<double>(t.word_count);
  return mean > 0 ? w / mean : w;
}

SentimentLexicon::SentimentLexicon(std::unordered_map<std::string, double> valences,
                                   text::WordList boosters, text::WordList negations)
    : valences_(std::move(valences)),
      boosters_(std::move(boosters)),
      negations_(std::move(negations)) {}

const SentimentLexicon& SentimentLexicon::standard() {
  static const SentimentLexicon instance(
      parse_valences(resources::embedded("sentiment_lexicon.tsv")),
      text::WordList::embedded("boosters.txt"), text::WordList::embedded("negations.txt"));
  return instance;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::string contents;
  try {
    contents = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::kUnavailable, "LEXICON_UNAVAILABLE", "lexicon unavailable",
                path.string());
  }
  return SentimentLexicon(parse_valences(contents), text::WordList::embedded("boosters.txt"),
                          text::WordList::embedded("negations.txt"));
}

std::optional<double> SentimentLexicon::valence(const std::string& lower) const {
  auto it = valences_.find(lower);
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

double sentiment(const text::TokenizedText& t, const SentimentLexicon& lex,
                 const SentimentConfig& cfg) {
  if (t.word_count == 0) return 0.0;
  double sum = 0;
  for (const auto& s : t.sentences) {
    bool exclaim = ends_with_exclaim(t, s);
    bool boosted = false;
    std::vector<const text::Token*> window;  // preceding words in this sentence
    for (std::size_t i = s.first; i < s.last; ++i) {
      const auto& tok = t.tokens[i];
      if (!tok.is_word) continue;
      if (auto v = lex.valence(tok.lower)) {
        double score = *v / 4.0;
        std::size_t from = window.size() > static_cast<std::size_t>(cfg.negation_window)
                               ? window.size() - static_cast<std::size_t>(cfg.negation_window)
                               : 0;
        for (std::size_t k = from; k < window.size(); ++k) {
          if (lex.is_negation(window[k]->lower)) {
            score *= cfg.negation_scalar;
            break;
          }
        }
        if (boosted) {
          score *= cfg.booster_scalar;
          boosted = false;
        }
        if (all_caps(tok.surface)) score *= cfg.caps_scalar;
        if (exclaim) score *= cfg.exclaim_scalar;
        sum += score;
      } else if (lex.is_booster(tok.lower)) {
        boosted = true;
      }
      window.push_back(&tok);
    }
  }
  return std::clamp(sum / static_cast<double>(t.word_count), -1.0, 1.0);
}

FaithfulnessTrace faithfulness_trace(const std::vector<std::string>& article,
                                     const std::vector<std::string>& summary,
                                     double eps) {
  FaithfulnessTrace tr;
  auto ga = annotate::disjoint_entity_sets(annotate::similar_entities(article, eps), article);
  auto gs = annotate::disjoint_entity_sets(annotate::similar_entities(summary, eps), summary);
  tr.summary_unique = gs.representatives;

  std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (occurrences, group)
  for (std::size_t g = 0; g < ga.representatives.size(); ++g) {
    std::size_t occ = 0;
    for (const auto& m : article) {
      occ += annotate::fuzzy_ratio(m, ga.representatives[g]) >= eps;
    }
    ranked.emplace_back(occ, g);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [occ, g] : ranked) tr.article_unique.push_back(ga.representatives[g]);

  const std::size_t ls = tr.summary_unique.size();
  const std::size_t la = tr.article_unique.size();
  if (la == 0) return tr;
  std::size_t take;
  if (ls < 3 && la > 4) {
    take = 5;
  } else if (la < ls || ls == 0) {
    take = la;
  } else {
    take = ls;
  }
  tr.top.assign(tr.article_unique.begin(),
                tr.article_unique.begin() + static_cast<std::ptrdiff_t>(take));
  for (const auto& e1 : tr.summary_unique) {
    for (const auto& e2 : tr.top) tr.matches += annotate::fuzzy_ratio(e1, e2) >= eps;
  }
  tr.score = std::clamp(static_cast<double>(tr.matches) / static_cast<double>(tr.top.size()),
                        0.0, 1.0);
  return tr;
}

double faithfulness(const std::vector<std::string>& article,
                    const std::vector<std::string>& summary, double eps) {
  return faithfulness_trace(article, summary, eps).score;
}

NaturalnessFeatures naturalness_features(const std::vector<annotate::SentenceParse>& parses) {
  if (parses.empty()) {
    throw Error(ErrorKind::kInvalidInput, "NO_PARSES", "no parses");
  }
  NaturalnessFeatures f{};
  for (const auto& p : parses) {
    f[0] += annotate::left_subtree_height(p);
    f[1] += annotate::right_subtree_height(p);
    f[2] += annotate::tree_height(p);
    f[3] += static_cast<double>(p.token_count());
  }
  for (auto& x : f) x /= static_cast<double>(parses.size());
  return f;
}

void NaturalnessWeights::validate() const {
  double sum = 0;
  for (double x : w) {
    if (!(x >= 0)) {
      throw Error(ErrorKind::kInvalidInput, "INVALID_WEIGHTS",
                  "naturalness weights must be nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_WEIGHTS",
                "naturalness weights must sum to 1", "sum = " + std::to_string(sum));
  }
}

double naturalness_raw(const NaturalnessFeatures& f, const NaturalnessWeights& weights) {
  double x = 0;
  for (std::size_t i = 0; i < f.size(); ++i) x += weights.w[i] * f[i];
  return x;
}

NaturalnessScale NaturalnessScale::fit(const std::vector<double>& raws) {
  if (raws.empty()) {
    throw Error(ErrorKind::kInvalidInput, "EMPTY_CORPUS", "empty corpus");
  }
  auto [lo, hi] = std::minmax_element(raws.begin(), raws.end());
  return {*lo, *hi};
}

double NaturalnessScale::score(double raw) const {
  if (max == min) return 0.5;
  return std::clamp(1.0 - (raw - min) / (max - min), 0.0, 1.0);
}

std::size_t length(const text::TokenizedText& t) { return t.word_count; }

MetricConfig MetricConfig::from_json(const nlohmann::json& j) {
  MetricConfig c;
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("sentiment")) {
    const auto& s = j.at("sentiment");
    c.sentiment.negation_scalar = s.value("negation_scalar", c.sentiment.negation_scalar);
    c.sentiment.negation_window = s.value("negation_window", c.sentiment.negation_window);
    c.sentiment.booster_scalar = s.value("booster_scalar", c.sentiment.booster_scalar);
    c.sentiment.caps_scalar = s.value("caps_scalar", c.sentiment.caps_scalar);
    c.sentiment.exclaim_scalar = s.value("exclaim_scalar", c.sentiment.exclaim_scalar);
  }
  if (j.contains("naturalness_weights")) {
    c.naturalness.w = j.at("naturalness_weights").get<std::array<double, 4>>();
  }
  if (!(c.epsilon > 0 && c.epsilon <= 1)) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_CONFIG", "epsilon must be in (0, 1]");
  }
  c.naturalness.validate();
  return c;
}

nlohmann::json MetricConfig::to_json() const {
  return {{"epsilon", epsilon},
          {"sentiment",
           {{"negation_scalar", sentiment.negation_scalar},
            {"negation_window", sentiment.negation_window},
            {"booster_scalar", sentiment.booster_scalar},
            {"caps_scalar", sentiment.caps_scalar},
            {"exclaim_scalar", sentiment.exclaim_scalar}}},
          {"naturalness_weights", naturalness.w}};
}

double FeatureScores::value(Feature f) const {
  switch (f) {
    case Feature::kComplexity: return complexity;
    case Feature::kFormality: return formality;
    case Feature::kSentiment: return sentiment;
    case Feature::kFaithfulness: return faithfulness;
    case Feature::kNaturalness:
      if (!naturalness) {
        throw Error(ErrorKind::kPrecondition, "NATURALNESS_PENDING",
                    "naturalness not yet normalized");
      }
      return *naturalness;
    case Feature::kLength: return static_cast<double>(length);
  }
  return 0;
}

std::array<double, kFeatureCount> FeatureScores::values() const {
  std::array<double, kFeatureCount> out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = value(kAllFeatures[i]);
  return out;
}

FeatureLevels categorize_all(const FeatureScores& s) {
  FeatureLevels out;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out[i] = categorize(kAllFeatures[i], s.value(kAllFeatures[i]));
  }
  return out;
}

FeatureScores build_feature_vector(const TextRef& summary, const TextRef& article,
                                   const MetricContext& ctx) {
  FeatureScores out;
  std::vector<std::string> errors;
  auto guard = [&](Feature f, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      errors.push_back(std::string(feature_name(f)) + ": " + e.what());
    }
  };

  auto st = ctx.tokenizer->tokenize(summary.text);
  guard(Feature::kComplexity, [&] { out.complexity = complexity(st, *ctx.syllables); });
  guard(Feature::kFormality, [&] { out.formality = formality_mtld(st); });
  guard(Feature::kSentiment,
        [&] { out.sentiment = sentiment(st, *ctx.lexicon, ctx.config.sentiment); });
  out.length = length(st);

  std::optional<annotate::AnnotationBundle> summary_ann;
  guard(Feature::kFaithfulness, [&] {
    summary_ann = ctx.annotations->annotate(summary.id, summary.text, st);
    auto at = ctx.tokenizer->tokenize(article.text);
    auto article_ann = ctx.annotations->annotate(article.id, article.text, at);
    std::vector<std::string> a, s;
    for (const auto& m : article_ann.entities) a.push_back(m.text);
    for (const auto& m : summary_ann->entities) s.push_back(m.text);
    out.faithfulness = faithfulness(a, s, ctx.config.epsilon);
  });
  guard(Feature::kNaturalness, [&] {
    if (!summary_ann) {
      summary_ann = ctx.annotations->annotate(summary.id, summary.text, st);
    }
    out.naturalness_features = naturalness_features(summary_ann->parses);
    out.naturalness_raw = naturalness_raw(out.naturalness_features, ctx.config.naturalness);
  });

  if (!errors.empty()) {
    std::string detail;
    for (const auto& e : errors) detail += (detail.empty() ? "" : "\n") + e;
    throw Error(ErrorKind::kInvalidInput, "FEATURE_ERRORS",
                "feature computation failed for " + summary.id, detail);
  }
  return out;
}

}  // namespace promptscope::metrics
