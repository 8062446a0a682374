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
#ifndef PROMPTSCOPE_ANALYTICS_EXPLORE_HPP_
#define PROMPTSCOPE_ANALYTICS_EXPLORE_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/analytics/optics.hpp"
#include "promptscope/analytics/projection.hpp"
#include "promptscope/analytics/stats.hpp"

namespace promptscope::analytics {

struct FeatureTarget {
  bool included = false;
  std::optional<std::string> level;                // categorical target
  std::optional<std::array<double, 2>> range;      // numeric [lo, hi]

  bool contains(metrics::Feature f, double value) const;
};

struct FeatureConfig {
  std::array<FeatureTarget, kFeatureCount> targets{};

  // Throws Error(INVALID_CONFIG) or Error(INVALID_LEVEL).
  void validate() const;
  std::array<bool, kFeatureCount> included_mask() const;

  nlohmann::json to_json() const;
  // Validates before returning.
  static FeatureConfig from_json(const nlohmann::json& j);
};

struct ClusterProfile {
  int cluster = 0;
  FeatureRow lower{};  // scaled bar ends in [0, 1]
  FeatureRow upper{};
  FeatureRow mean{};
};

// rows are raw feature values for every point; global statistics use all of
// them, noise included.
std::vector<ClusterProfile> cluster_profiles(const ClusterModel& model,
                                             const std::vector<FeatureRow>& rows);
double profile_scale(double x, double gmin, double gmean, double gmax);

struct ClusterMatch {
  int cluster = kNoise;
  double fit = 0;
  std::vector<double> fits;  // per cluster id
};

// Throws Error(NO_CLUSTERS) when the model has no cluster.
ClusterMatch match_cluster(const FeatureConfig& config, const ClusterModel& model,
                           const std::vector<FeatureRow>& rows);

inline constexpr std::size_t kTrajectorySamples = 100;
inline constexpr double kDefaultSignificance = 0.25;

enum class TrajectoryClass { kBetter, kWorse, kInsignificant };
std::string_view trajectory_class_name(TrajectoryClass c);

struct TrajectorySegment {
  std::string case_id;
  std::size_t weight = 1;
  Point2 old_point{};
  Point2 new_point{};
  std::vector<Point2> samples;
  double delta = 0;
  TrajectoryClass cls = TrajectoryClass::kInsignificant;
};

double masked_distance(const FeatureRow& a, const FeatureRow& b,
                       const std::array<bool, kFeatureCount>& mask);

TrajectorySegment sample_trajectory(const ProjectionModel& projection, const FeatureRow& z_old,
                                    const FeatureRow& z_new, const FeatureRow& target,
                                    const std::array<bool, kFeatureCount>& included,
                                    double delta_threshold = kDefaultSignificance);

struct LayoutOptions {
  std::size_t iterations = 300;
  double stiffness = 0.05;
  double tolerance = 0.01;  // residual overlap as a fraction of the radius sum
  std::size_t max_extra_sweeps = 2000;
};

// Spring toward the cluster centroid of the input positions (noise points
// have no spring) followed by pairwise overlap resolution, in a fixed order.
std::vector<Point2> declutter_layout(const std::vector<Point2>& points,
                                     const std::vector<int>& labels,
                                     const std::vector<double>& radii,
                                     const LayoutOptions& options = {});

}  // namespace promptscope::analytics

#endif  // PROMPTSCOPE_ANALYTICS_EXPLORE_HPP_
