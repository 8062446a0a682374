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
#include "promptscope/llm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <sstream>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/strings.hpp"

namespace promptscope::llm {
namespace {

constexpr std::string_view kReplyRule = " Answer with one digit from 1 to 5 and nothing else.";

std::size_t idx(ScoreMetric m) { return static_cast<std::size_t>(m); }
std::size_t idx(DefinitionLevel d) { return static_cast<std::size_t>(d); }

Error bad_option(const std::string& msg) {
  return Error(ErrorKind::kInvalidInput, "INVALID_EXPERIMENT", msg);
}

}  // namespace

std::string_view metric_name(ScoreMetric m) {
  switch (m) {
    case ScoreMetric::kSentiment: return "sentiment";
    case ScoreMetric::kReadability: return "readability";
    case ScoreMetric::kTruthfulness: return "truthfulness";
  }
  return {};
}

ScoreMetric parse_metric(std::string_view name) {
  for (auto m : {ScoreMetric::kSentiment, ScoreMetric::kReadability, ScoreMetric::kTruthfulness}) {
    if (metric_name(m) == name) return m;
  }
  throw bad_option("unknown metric '" + std::string(name) +
                   "'; expected sentiment, readability or truthfulness");
}

std::string_view definition_level_name(DefinitionLevel d) {
  switch (d) {
    case DefinitionLevel::kNone: return "none";
    case DefinitionLevel::kBeginner: return "beginner";
    case DefinitionLevel::kExpert: return "expert";
  }
  return {};
}

DefinitionLevel parse_definition_level(std::string_view name) {
  for (auto d : {DefinitionLevel::kNone, DefinitionLevel::kBeginner, DefinitionLevel::kExpert}) {
    if (definition_level_name(d) == name) return d;
  }
  throw bad_option("unknown definition level '" + std::string(name) +
                   "'; expected none, beginner or expert");
}

ScoringPrompts ScoringPrompts::standard() {
  ScoringPrompts p;
  auto put = [&](ScoreMetric m, DefinitionLevel d, std::string_view body) {
    p.texts_[idx(m)][idx(d)] = std::string(body) + std::string(kReplyRule);
  };
  using M = ScoreMetric;
  using D = DefinitionLevel;
  put(M::kSentiment, D::kNone,
      "Rate the sentiment of the summary on a scale of 1 to 5.");
  put(M::kSentiment, D::kBeginner,
      "Rate how the summary feels on a scale of 1 to 5, where 1 sounds upset or gloomy, 3 "
      "sounds neither happy nor sad, and 5 sounds cheerful.");
  put(M::kSentiment, D::kExpert,
      "Rate the polarity of the summary on a scale of 1 to 5. Weigh the valence of its "
      "evaluative words, account for negation and intensifiers, and judge the overall "
      "attitude toward its subject: 1 strongly negative, 3 neutral or balanced, 5 strongly "
      "positive.");
  put(M::kReadability, D::kNone,
      "Rate the readability of the summary on a scale of 1 to 5.");
  put(M::kReadability, D::kBeginner,
      "Rate how easy the summary is to read on a scale of 1 to 5, where 1 is hard going with "
      "long sentences and rare words and 5 could be read by a young student.");
  put(M::kReadability, D::kExpert,
      "Rate the readability of the summary on a scale of 1 to 5. Consider mean sentence "
      "length, syllables per word, the share of uncommon vocabulary and the depth of clause "
      "nesting: 1 needs graduate-level reading skill, 5 suits a primary-school reader.");
  put(M::kTruthfulness, D::kNone,
      "Rate the truthfulness of the summary with respect to the article on a scale of 1 to 5.");
  put(M::kTruthfulness, D::kBeginner,
      "Rate on a scale of 1 to 5 whether the summary only says things the article says, where "
      "1 means it makes things up or gets facts wrong and 5 means everything matches the "
      "article.");
  put(M::kTruthfulness, D::kExpert,
      "Rate the factual consistency of the summary against the article on a scale of 1 to 5. "
      "Check each claim, entity, number and causal link for support in the article and "
      "penalize contradictions and unsupported additions: 1 mostly unsupported, 5 fully "
      "entailed.");
  return p;
}

ScoringPrompts ScoringPrompts::with_overrides(const std::filesystem::path& path) {
  auto p = standard();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_PROMPTS", "prompt file is not valid JSON",
                e.what());
  }
  if (!j.is_object()) throw bad_option("prompt file must hold an object");
  for (const auto& [metric, levels] : j.items()) {
    auto m = parse_metric(metric);
    if (!levels.is_object()) throw bad_option("prompt entry for " + metric + " must be an object");
    for (const auto& [level, text] : levels.items()) {
      if (!text.is_string()) throw bad_option("prompt text must be a string");
      p.set(m, parse_definition_level(level), text.get<std::string>());
    }
  }
  return p;
}

const std::string& ScoringPrompts::text(ScoreMetric m, DefinitionLevel d) const {
  return texts_[idx(m)][idx(d)];
}

void ScoringPrompts::set(ScoreMetric m, DefinitionLevel d, std::string text) {
  texts_[idx(m)][idx(d)] = std::move(text);
}

std::optional<int> parse_digit_score(std::string_view reply) {
  auto t = trim(reply);
  if (t.empty() || t.front() < '1' || t.front() > '5') return std::nullopt;
  return t.front() - '0';
}

double population_variance(const std::vector<int>& scores) {
  if (scores.empty()) return 0.0;
  double mean = 0;
  for (int s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double ss = 0;
  for (int s : scores) ss += (s - mean) * (s - mean);
  return ss / static_cast<double>(scores.size());
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "temperature,item_id,n_scores,scores,variance\n";
  for (const auto& r : items) {
    os << r.temperature << ',' << r.item_id << ',' << r.scores.size() << ',';
    for (std::size_t i = 0; i < r.scores.size(); ++i) os << (i ? ";" : "") << r.scores[i];
    os << ',' << r.variance << '\n';
  }
  return os.str();
}

nlohmann::json ExperimentReport::summary_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : summary) {
    rows.push_back({{"temperature", s.temperature},
                    {"items", s.items},
                    {"excluded", s.excluded},
                    {"mean_variance", s.mean_variance}});
  }
  return {{"temperatures", rows}, {"unparseable_replies", unparseable_replies}};
}

ExperimentReport consistency_experiment(Gateway& gateway, const std::vector<ExperimentItem>& items,
                                        const ExperimentOptions& options) {
  if (items.empty()) throw bad_option("experiment needs at least one item");
  if (options.levels.empty()) throw bad_option("experiment needs at least one definition level");
  if (options.temperatures.empty()) throw bad_option("experiment needs at least one temperature");
  if (options.repeats < 1) throw bad_option("repeats must be at least 1");
  const bool needs_article = options.metric == ScoreMetric::kTruthfulness;
  for (const auto& it : items) {
    if (needs_article && it.article.empty()) {
      throw bad_option("truthfulness scoring needs the article for item " + it.id);
    }
  }

  struct Outcome {
    std::vector<int> scores;
    std::size_t unparseable = 0;
  };
  auto score_item = [&](const ExperimentItem& item, double temperature) {
    Outcome out;
    std::string user = needs_article
                           ? "Article:\n" + item.article + "\n\nSummary:\n" + item.summary
                           : "Summary:\n" + item.summary;
    for (auto level : options.levels) {
      for (int r = 0; r < options.repeats; ++r) {
        CompletionRequest req;
        req.model = options.model;
        req.temperature = temperature;
        req.tags[std::string(tag::kTask)] = "score";
        req.tags["level"] = std::string(definition_level_name(level));
        req.tags["repeat"] = std::to_string(r);
        req.messages = {{"system", options.prompts.text(options.metric, level)}, {"user", user}};
        auto s = parse_digit_score(gateway.complete(req).text);
        if (s) {
          out.scores.push_back(*s);
        } else {
          ++out.unparseable;
        }
      }
    }
    return out;
  };

  ExperimentReport report;
  for (double temperature : options.temperatures) {
    std::vector<Outcome> outcomes(items.size());
    std::vector<std::exception_ptr> failures(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < items.size(); i = next++) {
        try {
          outcomes[i] = score_item(items[i], temperature);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    std::size_t workers =
        std::min<std::size_t>(items.size(), std::max(1, gateway.options().max_in_flight));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
    TemperatureSummary sum;
    sum.temperature = temperature;
    double total = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto& out = outcomes[i];
      report.unparseable_replies += out.unparseable;
      if (out.unparseable > 0) {
        ++sum.excluded;
        continue;
      }
      ItemVariance row{temperature, items[i].id, out.scores, population_variance(out.scores)};
      total += row.variance;
      ++sum.items;
      report.items.push_back(std::move(row));
    }
    sum.mean_variance = sum.items ? total / static_cast<double>(sum.items) : 0.0;
    report.summary.push_back(sum);
  }
  if (report.items.empty()) {
    throw Error(ErrorKind::kBackend, "NO_SCORES", "no scores",
                std::to_string(report.unparseable_replies) + " replies could not be parsed");
  }
  return report;
}

}  // namespace promptscope::llm
