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
#ifndef PROMPTSCOPE_WORKSPACE_VIEWS_HPP_
#define PROMPTSCOPE_WORKSPACE_VIEWS_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/workspace/project.hpp"

namespace promptscope::workspace {

// Read-only projections of a project used by the API and the exporter. All
// of them throw NO_BASELINE before the baseline run.

struct ClusterPoint {
  std::string doc_id;
  analytics::Point2 xy{};
  int cluster = analytics::kNoise;
};
std::vector<ClusterPoint> cluster_points(const Project& p);

// Per feature, per cluster min/max of raw values, plus the global range.
struct FeatureDistribution {
  metrics::Feature feature{};
  double global_min = 0, global_max = 0, global_mean = 0;
  std::vector<std::array<double, 2>> per_cluster;  // indexed by cluster id
};
std::vector<FeatureDistribution> feature_distributions(const Project& p);

// Target interval of an included feature on the raw scale.
std::array<double, 2> target_interval(metrics::Feature f, const analytics::FeatureTarget& t);

struct FeatureBar {
  metrics::Feature feature{};
  double value = 0;         // raw
  double scaled = 0;        // profile scale in [0, 1]
  bool included = false;
  bool in_target = false;
  std::optional<std::array<double, 2>> target_scaled;
};

struct ExampleCard {
  std::string doc_id;
  std::string summary;
  double fit = 0;  // share of included features on target
  bool starred = false;
  std::vector<FeatureBar> bars;
};

struct ExampleRecommendations {
  analytics::ClusterMatch match;
  std::vector<ExampleCard> cards;  // members of the matched cluster, best fit first
};
// Throws NO_CONFIG when no configuration is set.
ExampleRecommendations recommend_examples(const Project& p);

struct Dot {
  std::string doc_id;
  double value = 0;
  std::size_t weight = 1;
  bool in_band = false;
};
struct DotRow {
  metrics::Feature feature{};
  bool included = false;
  std::optional<std::array<double, 2>> band;
  std::vector<Dot> dots;
};
struct DotPlot {
  int version_id = 0;
  std::vector<DotRow> rows;
  std::vector<std::string> missing;  // validation cases without an output
};
DotPlot dot_plot(const Project& p, int version_id);

struct Comparison {
  int old_version = 0;
  int new_version = 0;
  int target_cluster = analytics::kNoise;
  analytics::FeatureRow target_z{};
  std::vector<analytics::TrajectorySegment> trajectories;
  std::vector<analytics::Point2> target_points;
  std::vector<std::string> missing;
  std::size_t better = 0, worse = 0, insignificant = 0;
};
// Trajectories of every validation case from old to new. Throws NO_CONFIG.
Comparison compare_versions(const Project& p, int old_version, int new_version);

// One row per (run, document) pair, documents in dataset order.
std::string export_csv(const Project& p);

nlohmann::json to_json(const ClusterPoint& c);
nlohmann::json to_json(const FeatureDistribution& d);
nlohmann::json to_json(const ExampleRecommendations& r);
nlohmann::json to_json(const DotPlot& d);
nlohmann::json to_json(const Comparison& c);
nlohmann::json to_json(const analytics::CorrelationMatrix& m);
nlohmann::json to_json(const analytics::ClusterProfile& pr);

}  // namespace promptscope::workspace

#endif  // PROMPTSCOPE_WORKSPACE_VIEWS_HPP_
