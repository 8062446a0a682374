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
#include "promptscope/metrics/levels.hpp"

#include <limits>

#include "promptscope/common/error.hpp"

namespace promptscope::metrics {
namespace {

struct Table {
  std::vector<std::string> names;
  std::vector<double> lower;
};

const Table& table(Feature f) {
  static const std::array<Table, kFeatureCount> kTables = {{
      {{"Elementary", "Middle School", "High School", "College", "Professional"},
       {0, 10, 40, 50, 90}},
      {{"Informal", "Standard", "Formal", "Very Formal"}, {0, 60, 100, 200}},
      {{"Negative", "Neutral", "Positive"}, {-1, -0.3, 0.3}},
      {{"Bad", "Low", "Avg", "Good"}, {0, 0.25, 0.4, 0.6}},
      {{"Bad", "Low", "Avg", "Good"}, {0, 0.435, 0.607, 0.715}},
      {{"Short", "Mid", "Long", "Very Long"}, {0, 100, 300, 500}},
  }};
  return kTables[static_cast<std::size_t>(f)];
}

}  // namespace

std::string_view feature_name(Feature f) {
  static constexpr std::array<std::string_view, kFeatureCount> kNames = {
      "complexity", "formality", "sentiment", "faithfulness", "naturalness", "length"};
  return kNames[static_cast<std::size_t>(f)];
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (auto f : kAllFeatures) {
    if (feature_name(f) == name) return f;
  }
  return std::nullopt;
}

const std::vector<std::string>& level_names(Feature f) { return table(f).names; }

bool is_level(Feature f, std::string_view level) {
  for (const auto& n : table(f).names) {
    if (n == level) return true;
  }
  return false;
}

std::string categorize(Feature f, double score) {
  const auto& t = table(f);
  std::size_t idx = 0;
  for (std::size_t i = 1; i < t.lower.size(); ++i) {
    if (score >= t.lower[i]) idx = i;
  }
  return t.names[idx];
}

LevelRange level_range(Feature f, std::string_view level) {
  const auto& t = table(f);
  for (std::size_t i = 0; i < t.names.size(); ++i) {
    if (t.names[i] != level) continue;
    double upper = i + 1 < t.lower.size() ? t.lower[i + 1]
                                          : std::numeric_limits<double>::infinity();
    return {t.lower[i], upper};
  }
  std::string legal;
  for (const auto& n : t.names) legal += (legal.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::kInvalidInput, "INVALID_LEVEL",
              "unknown level '" + std::string(level) + "' for " +
                  std::string(feature_name(f)),
              "legal levels: " + legal);
}

}  // namespace promptscope::metrics
