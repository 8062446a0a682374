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
#ifndef PROMPTSCOPE_ANALYTICS_STATS_HPP_
#define PROMPTSCOPE_ANALYTICS_STATS_HPP_

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/metrics/levels.hpp"

namespace promptscope::analytics {

using metrics::kFeatureCount;
using FeatureRow = std::array<double, kFeatureCount>;

struct BaselineStats {
  FeatureRow mean{};
  FeatureRow stddev{};  // population standard deviation

  // Throws Error(EMPTY_CORPUS) on an empty corpus.
  static BaselineStats fit(const std::vector<FeatureRow>& rows);
  FeatureRow standardize(const FeatureRow& row) const;  // sigma 0 -> z 0

  nlohmann::json to_json() const;
  static BaselineStats from_json(const nlohmann::json& j);
};

std::vector<FeatureRow> standardize(const std::vector<FeatureRow>& rows,
                                    const BaselineStats& stats);

inline constexpr double kDefaultCorrelationThreshold = 0.3;

struct CorrelationMatrix {
  std::array<FeatureRow, kFeatureCount> r{};
  std::array<std::array<bool, kFeatureCount>, kFeatureCount> significant{};
};

// Throws Error(INSUFFICIENT_DATA) for fewer than three rows.
CorrelationMatrix pearson_matrix(const std::vector<FeatureRow>& rows,
                                 double tau = kDefaultCorrelationThreshold);

double euclidean(const FeatureRow& a, const FeatureRow& b);

}  // namespace promptscope::analytics

#endif  // PROMPTSCOPE_ANALYTICS_STATS_HPP_
