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
#ifndef PROMPTSCOPE_ANALYTICS_OPTICS_HPP_
#define PROMPTSCOPE_ANALYTICS_OPTICS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace promptscope::analytics {

using Point = std::vector<double>;

inline constexpr int kNoise = -1;

struct OpticsParams {
  std::size_t min_samples = 0;  // 0 selects max(5, ceil(1% of N))
  double xi = 0.05;
  // A member farther from every other member than this multiple of their
  // largest core distance is relabelled as noise.
  double outlier_factor = 2.0;

  static std::size_t default_min_samples(std::size_t n);
};

struct OpticsGraph {
  std::vector<std::size_t> ordering;
  std::vector<double> core_distance;
  std::vector<double> reachability;  // indexed by point, +inf when unreached
  std::vector<long> predecessor;     // -1 when none
};

// Reachability graph with Euclidean distances. Core distance counts the
// point itself among its min_samples nearest neighbours.
OpticsGraph optics_graph(const std::vector<Point>& points, std::size_t min_samples);

struct Interval {
  std::size_t start;  // positions in the ordering, inclusive
  std::size_t end;
  bool operator==(const Interval& o) const { return start == o.start && end == o.end; }
};

// Xi-steep candidate clusters over the reachability plot, smaller clusters
// before the larger ones that contain them.
std::vector<Interval> xi_clusters(const OpticsGraph& graph, double xi, std::size_t min_samples,
                                  std::size_t min_cluster_size);

// Chooses clusters from the candidate hierarchy: a candidate is replaced by
// its maximal sub-candidates when they leave fewer than min_cluster_size of
// its points uncovered.
std::vector<Interval> select_clusters(const std::vector<Interval>& candidates,
                                      std::size_t min_cluster_size);

struct ClusterModel {
  std::vector<int> labels;             // cluster id or kNoise, per point
  std::vector<std::size_t> centroids;  // member index per cluster id
  std::vector<std::size_t> sizes;
  std::size_t min_samples = 0;
  double xi = 0.05;
  OpticsGraph graph;
  std::string warning;

  std::size_t cluster_count() const { return sizes.size(); }
  std::vector<std::size_t> members(int cluster) const;

  nlohmann::json to_json() const;
  static ClusterModel from_json(const nlohmann::json& j);
};

ClusterModel cluster_optics(const std::vector<Point>& points, OpticsParams params = {});

// Member nearest the cluster mean; ties go to the lowest index.
std::size_t nearest_to_mean(const std::vector<Point>& points,
                            const std::vector<std::size_t>& members);

struct ValidationEntry {
  std::size_t index;  // point index of the centroid member
  std::size_t weight;
  int cluster;
};

// Throws Error(NO_CLUSTERS) when the model has no cluster.
std::vector<ValidationEntry> select_validation_set(const ClusterModel& model);

}  // namespace promptscope::analytics

#endif  // PROMPTSCOPE_ANALYTICS_OPTICS_HPP_
