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
#include "promptscope/analytics/stats.hpp"

#include <algorithm>
#include <cmath>

#include "promptscope/common/error.hpp"

namespace promptscope::analytics {

BaselineStats BaselineStats::fit(const std::vector<FeatureRow>& rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::kInvalidInput, "EMPTY_CORPUS", "empty corpus");
  }
  BaselineStats s;
  const double n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) s.mean[f] += row[f];
  }
  for (auto& m : s.mean) m /= n;
  for (const auto& row : rows) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      double d = row[f] - s.mean[f];
      s.stddev[f] += d * d;
    }
  }
  for (auto& v : s.stddev) v = std::sqrt(v / n);
  return s;
}

FeatureRow BaselineStats::standardize(const FeatureRow& row) const {
  FeatureRow z{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    z[f] = stddev[f] > 0 ? (row[f] - mean[f]) / stddev[f] : 0.0;
  }
  return z;
}

nlohmann::json BaselineStats::to_json() const {
  return {{"mean", mean}, {"stddev", stddev}};
}

BaselineStats BaselineStats::from_json(const nlohmann::json& j) {
  BaselineStats s;
  s.mean = j.at("mean").get<FeatureRow>();
  s.stddev = j.at("stddev").get<FeatureRow>();
  return s;
}

std::vector<FeatureRow> standardize(const std::vector<FeatureRow>& rows,
                                    const BaselineStats& stats) {
  std::vector<FeatureRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(stats.standardize(r));
  return out;
}

CorrelationMatrix pearson_matrix(const std::vector<FeatureRow>& rows, double tau) {
  if (rows.size() < 3) {
    throw Error(ErrorKind::kPrecondition, "INSUFFICIENT_DATA", "insufficient data",
                "need at least 3 summaries, have " + std::to_string(rows.size()));
  }
  auto stats = BaselineStats::fit(rows);
  const double n = static_cast<double>(rows.size());
  CorrelationMatrix m;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    m.r[i][i] = 1.0;
    m.significant[i][i] = true;
    for (std::size_t j = i + 1; j < kFeatureCount; ++j) {
      double r = 0;
      if (stats.stddev[i] > 0 && stats.stddev[j] > 0) {
        double cov = 0;
        for (const auto& row : rows) {
          cov += (row[i] - stats.mean[i]) * (row[j] - stats.mean[j]);
        }
        r = std::clamp(cov / n / (stats.stddev[i] * stats.stddev[j]), -1.0, 1.0);
      }
      m.r[i][j] = m.r[j][i] = r;
      m.significant[i][j] = m.significant[j][i] =
          stats.stddev[i] > 0 && stats.stddev[j] > 0 && std::abs(r) >= tau;
    }
  }
  return m;
}

double euclidean(const FeatureRow& a, const FeatureRow& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace promptscope::analytics
