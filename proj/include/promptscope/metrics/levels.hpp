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
#ifndef PROMPTSCOPE_METRICS_LEVELS_HPP_
#define PROMPTSCOPE_METRICS_LEVELS_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace promptscope::metrics {

enum class Feature {
  kComplexity,
  kFormality,
  kSentiment,
  kFaithfulness,
  kNaturalness,
  kLength,
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::kComplexity,   Feature::kFormality,   Feature::kSentiment,
    Feature::kFaithfulness, Feature::kNaturalness, Feature::kLength};

std::string_view feature_name(Feature f);  // lowercase, e.g. "complexity"
std::optional<Feature> parse_feature(std::string_view name);

// Level names ordered from the lowest score bucket to the highest.
const std::vector<std::string>& level_names(Feature f);
bool is_level(Feature f, std::string_view level);

// Buckets are lower-inclusive; scores below the first bound fall in the first
// bucket and the last bucket is unbounded above.
std::string categorize(Feature f, double score);

struct LevelRange {
  double lower;
  double upper;  // +inf for the last bucket
};
// Throws Error(INVALID_LEVEL) listing the legal levels.
LevelRange level_range(Feature f, std::string_view level);

}  // namespace promptscope::metrics

#endif  // PROMPTSCOPE_METRICS_LEVELS_HPP_
