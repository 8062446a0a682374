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
#ifndef PROMPTSCOPE_LLM_EXPERIMENT_HPP_
#define PROMPTSCOPE_LLM_EXPERIMENT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/llm/gateway.hpp"

namespace promptscope::llm {

enum class ScoreMetric { kSentiment, kReadability, kTruthfulness };
enum class DefinitionLevel { kNone, kBeginner, kExpert };

std::string_view metric_name(ScoreMetric m);
ScoreMetric parse_metric(std::string_view name);
std::string_view definition_level_name(DefinitionLevel d);
DefinitionLevel parse_definition_level(std::string_view name);

// Scoring instructions per metric and definition level.
class ScoringPrompts {
 public:
  static ScoringPrompts standard();
  // JSON object {"<metric>": {"<level>": "<text>"}}; entries it names replace
  // the standard ones.
  static ScoringPrompts with_overrides(const std::filesystem::path& path);

  const std::string& text(ScoreMetric m, DefinitionLevel d) const;
  void set(ScoreMetric m, DefinitionLevel d, std::string text);

 private:
  std::string texts_[3][3];
};

// First character after trimming, if it is a digit 1..5.
std::optional<int> parse_digit_score(std::string_view reply);
double population_variance(const std::vector<int>& scores);

struct ExperimentItem {
  std::string id;
  std::string summary;
  std::string article;
};

struct ExperimentOptions {
  ScoreMetric metric = ScoreMetric::kSentiment;
  std::vector<DefinitionLevel> levels = {DefinitionLevel::kNone};
  std::vector<double> temperatures = {0.0};
  int repeats = 1;
  std::string model;
  ScoringPrompts prompts = ScoringPrompts::standard();
};

struct ItemVariance {
  double temperature = 0;
  std::string item_id;
  std::vector<int> scores;
  double variance = 0;
};

struct TemperatureSummary {
  double temperature = 0;
  std::size_t items = 0;      // items with every reply parsed
  std::size_t excluded = 0;   // items dropped for an unparseable reply
  double mean_variance = 0;
};

struct ExperimentReport {
  std::vector<ItemVariance> items;
  std::vector<TemperatureSummary> summary;
  std::size_t unparseable_replies = 0;

  // temperature,item_id,n_scores,scores,variance
  std::string to_csv() const;
  nlohmann::json summary_json() const;
};

// Each item is scored |levels| x repeats times per temperature and the
// population variance of those scores is reported. Throws Error(NO_SCORES)
// when no item survives parsing.
ExperimentReport consistency_experiment(Gateway& gateway, const std::vector<ExperimentItem>& items,
                                        const ExperimentOptions& options);

}  // namespace promptscope::llm

#endif  // PROMPTSCOPE_LLM_EXPERIMENT_HPP_
