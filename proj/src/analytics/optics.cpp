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
#include "promptscope/analytics/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "promptscope/common/error.hpp"

namespace promptscope::analytics {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct SteepDownArea {
  std::size_t start;
  std::size_t end;
  double mib;
};

std::size_t extend_region(const std::vector<bool>& steep, const std::vector<bool>& xward,
                          std::size_t start, std::size_t min_samples) {
  std::size_t non_xward = 0;
  std::size_t end = start;
  for (std::size_t index = start; index < steep.size(); ++index) {
    if (steep[index]) {
      non_xward = 0;
      end = index;
    } else if (!xward[index]) {
      if (++non_xward > min_samples) break;
    } else {
      return end;
    }
  }
  return end;
}

void update_filter_sdas(std::vector<SteepDownArea>& sdas, double mib, double xi_c,
                        const std::vector<double>& plot) {
  if (std::isinf(mib)) {
    sdas.clear();
    return;
  }
  std::vector<SteepDownArea> kept;
  for (auto sda : sdas) {
    if (mib <= plot[sda.start] * xi_c) {
      sda.mib = std::max(sda.mib, mib);
      kept.push_back(sda);
    }
  }
  sdas = std::move(kept);
}

bool correct_predecessor(const std::vector<double>& plot, const std::vector<long>& pred_plot,
                         const std::vector<std::size_t>& ordering, std::size_t& s,
                         std::size_t& e) {
  while (s < e) {
    if (plot[s] > plot[e]) return true;
    long p_e = pred_plot[e];
    for (std::size_t i = s; i < e; ++i) {
      if (p_e == static_cast<long>(ordering[i])) return true;
    }
    --e;
  }
  return false;
}

bool contains(const Interval& outer, const Interval& inner) {
  return outer.start <= inner.start && inner.end <= outer.end;
}

}  // namespace

std::size_t OpticsParams::default_min_samples(std::size_t n) {
  std::size_t pct = (n + 99) / 100;
  return std::max<std::size_t>(5, pct);
}

OpticsGraph optics_graph(const std::vector<Point>& points, std::size_t min_samples) {
  const std::size_t n = points.size();
  OpticsGraph g;
  g.core_distance.assign(n, kInf);
  g.reachability.assign(n, kInf);
  g.predecessor.assign(n, -1);
  if (n == 0) return g;

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = distance(points[i], points[j]);
  }
  const std::size_t k = std::min(min_samples, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = dist[i];
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    g.core_distance[i] = row[k - 1];
  }

  std::vector<bool> processed(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t point = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (processed[i]) continue;
      if (point == n || g.reachability[i] < g.reachability[point]) point = i;
    }
    processed[point] = true;
    g.ordering.push_back(point);
    for (std::size_t j = 0; j < n; ++j) {
      if (processed[j]) continue;
      double rd = std::max(dist[point][j], g.core_distance[point]);
      if (rd < g.reachability[j]) {
        g.reachability[j] = rd;
        g.predecessor[j] = static_cast<long>(point);
      }
    }
  }
  return g;
}

std::vector<Interval> xi_clusters(const OpticsGraph& graph, double xi, std::size_t min_samples,
                                  std::size_t min_cluster_size) {
  const std::size_t n = graph.ordering.size();
  std::vector<double> plot(n + 1);
  std::vector<long> pred_plot(n);
  for (std::size_t i = 0; i < n; ++i) {
    plot[i] = graph.reachability[graph.ordering[i]];
    pred_plot[i] = graph.predecessor[graph.ordering[i]];
  }
  plot[n] = kInf;

  const double xi_c = 1.0 - xi;
  std::vector<bool> steep_up(n), steep_down(n), down(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ratio = plot[i] / plot[i + 1];  // NaN compares false, as intended
    steep_up[i] = ratio <= xi_c;
    steep_down[i] = ratio >= 1.0 / xi_c;
    down[i] = ratio > 1.0;
    up[i] = ratio < 1.0;
  }

  std::vector<SteepDownArea> sdas;
  std::vector<Interval> clusters;
  std::size_t index = 0;
  double mib = 0.0;
  for (std::size_t steep_index = 0; steep_index < n; ++steep_index) {
    if (!(steep_up[steep_index] || steep_down[steep_index])) continue;
    if (steep_index < index) continue;
    for (std::size_t i = index; i <= steep_index; ++i) mib = std::max(mib, plot[i]);

    if (steep_down[steep_index]) {
      update_filter_sdas(sdas, mib, xi_c, plot);
      std::size_t d_end = extend_region(steep_down, up, steep_index, min_samples);
      sdas.push_back({steep_index, d_end, 0.0});
      index = d_end + 1;
      mib = plot[index];
    } else {
      update_filter_sdas(sdas, mib, xi_c, plot);
      std::size_t u_start = steep_index;
      std::size_t u_end = extend_region(steep_up, down, u_start, min_samples);
      index = u_end + 1;
      mib = plot[index];

      std::vector<Interval> found;
      for (const auto& d : sdas) {
        std::size_t c_start = d.start;
        std::size_t c_end = u_end;
        if (plot[c_end + 1] * xi_c < d.mib) continue;
        double d_max = plot[d.start];
        if (d_max * xi_c >= plot[c_end + 1]) {
          while (plot[c_start + 1] > plot[c_end + 1] && c_start < d.end) ++c_start;
        } else if (plot[c_end + 1] * xi_c >= d_max) {
          while (c_end > u_start && plot[c_end - 1] > d_max) --c_end;
        }
        if (!correct_predecessor(plot, pred_plot, graph.ordering, c_start, c_end)) continue;
        if (c_end - c_start + 1 < min_cluster_size) continue;
        if (c_start > d.end) continue;
        if (c_end < u_start) continue;
        found.push_back({c_start, c_end});
      }
      clusters.insert(clusters.end(), found.rbegin(), found.rend());
    }
  }
  return clusters;
}

std::vector<Interval> select_clusters(const std::vector<Interval>& candidates,
                                      std::size_t min_cluster_size) {
  std::vector<Interval> pool;
  for (const auto& c : candidates) {
    if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
  }
  auto maximal_within = [&](const Interval* parent) {
    std::vector<Interval> subs;
    for (const auto& c : pool) {
      if (parent && (c == *parent || !contains(*parent, c))) continue;
      subs.push_back(c);
    }
    std::vector<Interval> out;
    for (const auto& c : subs) {
      bool inside_other = false;
      for (const auto& d : subs) {
        if (!(d == c) && contains(d, c)) inside_other = true;
      }
      if (!inside_other) out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    return out;
  };

  std::vector<Interval> selected;
  std::vector<Interval> stack;
  auto roots = maximal_within(nullptr);
  stack.assign(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    Interval node = stack.back();
    stack.pop_back();
    auto children = maximal_within(&node);
    std::vector<bool> covered(node.end - node.start + 1, false);
    for (const auto& c : children) {
      for (std::size_t i = c.start; i <= c.end; ++i) covered[i - node.start] = true;
    }
    std::size_t uncovered = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), false));
    if (!children.empty() && uncovered < min_cluster_size) {
      stack.insert(stack.end(), children.rbegin(), children.rend());
    } else {
      selected.push_back(node);
    }
  }
  return selected;
}

std::size_t nearest_to_mean(const std::vector<Point>& points,
                            const std::vector<std::size_t>& members) {
  const std::size_t dim = points[members.front()].size();
  Point mean(dim, 0.0);
  for (auto m : members) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += points[m][d];
  }
  for (auto& x : mean) x /= static_cast<double>(members.size());
  std::size_t best = members.front();
  double best_d = kInf;
  for (auto m : members) {
    double d = distance(points[m], mean);
    if (d < best_d || (d == best_d && m < best)) {
      best = m;
      best_d = d;
    }
  }
  return best;
}

std::vector<std::size_t> ClusterModel::members(int cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.push_back(i);
  }
  return out;
}

ClusterModel cluster_optics(const std::vector<Point>& points, OpticsParams params) {
  const std::size_t n = points.size();
  ClusterModel model;
  model.min_samples = params.min_samples ? params.min_samples : OpticsParams::default_min_samples(n);
  model.xi = params.xi;
  model.labels.assign(n, kNoise);
  if (model.min_samples < 2) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_PARAMS", "min_samples must be at least 2");
  }
  if (!(params.xi > 0 && params.xi < 1)) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_PARAMS", "xi must be in (0, 1)");
  }
  if (n < model.min_samples) {
    model.warning = "fewer points (" + std::to_string(n) + ") than min_samples (" +
                    std::to_string(model.min_samples) + "); all points are noise";
    return model;
  }

  model.graph = optics_graph(points, model.min_samples);
  auto candidates = xi_clusters(model.graph, params.xi, model.min_samples, model.min_samples);
  auto chosen = select_clusters(candidates, model.min_samples);
  std::sort(chosen.begin(), chosen.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });

  std::vector<int> raw(n, kNoise);
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    for (std::size_t pos = chosen[k].start; pos <= chosen[k].end; ++pos) {
      auto p = model.graph.ordering[pos];
      if (raw[p] == kNoise) raw[p] = static_cast<int>(k);
    }
  }

  const auto& core = model.graph.core_distance;
  int next_id = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    std::vector<std::size_t> mem;
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] == static_cast<int>(k)) mem.push_back(i);
    }
    std::vector<std::size_t> kept;
    for (auto p : mem) {
      double nearest = kInf;
      double max_core = 0;
      for (auto q : mem) {
        if (q == p) continue;
        nearest = std::min(nearest, distance(points[p], points[q]));
        max_core = std::max(max_core, core[q]);
      }
      if (nearest <= params.outlier_factor * max_core) kept.push_back(p);
    }
    if (kept.size() < model.min_samples) continue;
    for (auto p : kept) model.labels[p] = next_id;
    model.sizes.push_back(kept.size());
    model.centroids.push_back(nearest_to_mean(points, kept));
    ++next_id;
  }
  return model;
}

std::vector<ValidationEntry> select_validation_set(const ClusterModel& model) {
  if (model.cluster_count() == 0) {
    throw Error(ErrorKind::kPrecondition, "NO_CLUSTERS", "no clusters");
  }
  std::vector<ValidationEntry> out;
  for (std::size_t k = 0; k < model.cluster_count(); ++k) {
    out.push_back({model.centroids[k], model.sizes[k], static_cast<int>(k)});
  }
  return out;
}

nlohmann::json ClusterModel::to_json() const {
  auto finite_or_null = [](const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json());
    return arr;
  };
  return {{"labels", labels},
          {"centroids", centroids},
          {"sizes", sizes},
          {"min_samples", min_samples},
          {"xi", xi},
          {"ordering", graph.ordering},
          {"core_distance", finite_or_null(graph.core_distance)},
          {"reachability", finite_or_null(graph.reachability)},
          {"warning", warning}};
}

ClusterModel ClusterModel::from_json(const nlohmann::json& j) {
  auto read = [](const nlohmann::json& arr) {
    std::vector<double> v;
    for (const auto& x : arr) v.push_back(x.is_null() ? kInf : x.get<double>());
    return v;
  };
  ClusterModel m;
  m.labels = j.at("labels").get<std::vector<int>>();
  m.centroids = j.at("centroids").get<std::vector<std::size_t>>();
  m.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  m.min_samples = j.at("min_samples").get<std::size_t>();
  m.xi = j.at("xi").get<double>();
  m.graph.ordering = j.value("ordering", std::vector<std::size_t>{});
  if (j.contains("core_distance")) m.graph.core_distance = read(j.at("core_distance"));
  if (j.contains("reachability")) m.graph.reachability = read(j.at("reachability"));
  m.warning = j.value("warning", "");
  return m;
}

}  // namespace promptscope::analytics
