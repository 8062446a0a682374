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
#include "promptscope/analytics/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "promptscope/common/error.hpp"

namespace promptscope::analytics {
namespace {

using metrics::Feature;
using metrics::kAllFeatures;

Error invalid_config(const std::string& message) {
  return Error(ErrorKind::kInvalidInput, "INVALID_CONFIG", message);
}

std::array<double, 2> feature_domain(Feature f) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  switch (f) {
    case Feature::kComplexity: return {0, 100};
    case Feature::kSentiment: return {-1, 1};
    case Feature::kFaithfulness:
    case Feature::kNaturalness: return {0, 1};
    default: return {0, kInf};
  }
}

}  // namespace

bool FeatureTarget::contains(Feature f, double value) const {
  if (level) return metrics::categorize(f, value) == *level;
  if (range) return value >= (*range)[0] && value <= (*range)[1];
  return true;
}

void FeatureConfig::validate() const {
  bool any = false;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto& t = targets[i];
    Feature f = kAllFeatures[i];
    std::string name(metrics::feature_name(f));
    if (t.level && t.range) throw invalid_config(name + ": give a level or a range, not both");
    if (t.level) metrics::level_range(f, *t.level);
    if (t.range) {
      auto [lo, hi] = *t.range;
      auto dom = feature_domain(f);
      if (!(lo <= hi)) throw invalid_config(name + ": range lower bound exceeds upper bound");
      if (lo < dom[0] || hi > dom[1]) throw invalid_config(name + ": range outside feature domain");
    }
    if (t.included) {
      if (!t.level && !t.range) throw invalid_config(name + ": included feature needs a target");
      any = true;
    }
  }
  if (!any) throw invalid_config("at least one feature must be included");
}

std::array<bool, kFeatureCount> FeatureConfig::included_mask() const {
  std::array<bool, kFeatureCount> m{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) m[i] = targets[i].included;
  return m;
}

nlohmann::json FeatureConfig::to_json() const {
  nlohmann::json features = nlohmann::json::object();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto& t = targets[i];
    nlohmann::json e = {{"included", t.included}};
    if (t.level) e["level"] = *t.level;
    if (t.range) e["range"] = *t.range;
    features[std::string(metrics::feature_name(kAllFeatures[i]))] = e;
  }
  return {{"features", features}};
}

FeatureConfig FeatureConfig::from_json(const nlohmann::json& j) {
  FeatureConfig c;
  try {
    const auto& features = j.at("features");
    for (const auto& [key, e] : features.items()) {
      auto f = metrics::parse_feature(key);
      if (!f) throw invalid_config("unknown feature '" + key + "'");
      auto& t = c.targets[static_cast<std::size_t>(*f)];
      t.included = e.value("included", false);
      if (e.contains("level") && !e.at("level").is_null()) t.level = e.at("level").get<std::string>();
      if (e.contains("range") && !e.at("range").is_null()) {
        t.range = e.at("range").get<std::array<double, 2>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw invalid_config(std::string("malformed feature config: ") + e.what());
  }
  c.validate();
  return c;
}

double profile_scale(double x, double gmin, double gmean, double gmax) {
  double h = std::max(gmax - gmean, gmean - gmin);
  if (h <= 0) return 0.5;
  return std::clamp(0.5 + (x - gmean) / (2 * h), 0.0, 1.0);
}

std::vector<ClusterProfile> cluster_profiles(const ClusterModel& model,
                                             const std::vector<FeatureRow>& rows) {
  std::vector<ClusterProfile> out;
  if (rows.empty()) return out;
  FeatureRow gmin = rows[0], gmax = rows[0], gmean{};
  for (const auto& r : rows) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      gmin[f] = std::min(gmin[f], r[f]);
      gmax[f] = std::max(gmax[f], r[f]);
      gmean[f] += r[f];
    }
  }
  for (auto& m : gmean) m /= static_cast<double>(rows.size());

  for (std::size_t k = 0; k < model.cluster_count(); ++k) {
    auto mem = model.members(static_cast<int>(k));
    if (mem.empty()) continue;
    ClusterProfile p;
    p.cluster = static_cast<int>(k);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      double lo = rows[mem[0]][f], hi = lo, sum = 0;
      for (auto i : mem) {
        lo = std::min(lo, rows[i][f]);
        hi = std::max(hi, rows[i][f]);
        sum += rows[i][f];
      }
      p.lower[f] = profile_scale(lo, gmin[f], gmean[f], gmax[f]);
      p.upper[f] = profile_scale(hi, gmin[f], gmean[f], gmax[f]);
      p.mean[f] = profile_scale(sum / static_cast<double>(mem.size()), gmin[f], gmean[f], gmax[f]);
    }
    out.push_back(p);
  }
  return out;
}

ClusterMatch match_cluster(const FeatureConfig& config, const ClusterModel& model,
                           const std::vector<FeatureRow>& rows) {
  if (model.cluster_count() == 0) {
    throw Error(ErrorKind::kPrecondition, "NO_CLUSTERS", "no clusters");
  }
  ClusterMatch best;
  std::size_t best_size = 0;
  for (std::size_t k = 0; k < model.cluster_count(); ++k) {
    auto mem = model.members(static_cast<int>(k));
    double total = 0;
    int features = 0;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto& t = config.targets[f];
      if (!t.included) continue;
      std::size_t inside = 0;
      for (auto i : mem) inside += t.contains(kAllFeatures[f], rows[i][f]);
      total += mem.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(mem.size());
      ++features;
    }
    double fit = features ? total / features : 0.0;
    best.fits.push_back(fit);
    constexpr double kEps = 1e-12;
    bool better = best.cluster == kNoise || fit > best.fit + kEps ||
                  (std::abs(fit - best.fit) <= kEps && mem.size() > best_size);
    if (better) {
      best.cluster = static_cast<int>(k);
      best.fit = fit;
      best_size = mem.size();
    }
  }
  return best;
}

std::string_view trajectory_class_name(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::kBetter: return "better";
    case TrajectoryClass::kWorse: return "worse";
    case TrajectoryClass::kInsignificant: return "insignificant";
  }
  return "insignificant";
}

double masked_distance(const FeatureRow& a, const FeatureRow& b,
                       const std::array<bool, kFeatureCount>& mask) {
  double s = 0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (mask[i]) s += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(s);
}

TrajectorySegment sample_trajectory(const ProjectionModel& projection, const FeatureRow& z_old,
                                    const FeatureRow& z_new, const FeatureRow& target,
                                    const std::array<bool, kFeatureCount>& included,
                                    double delta_threshold) {
  TrajectorySegment seg;
  seg.samples.reserve(kTrajectorySamples);
  for (std::size_t s = 0; s < kTrajectorySamples; ++s) {
    double t = static_cast<double>(s) / static_cast<double>(kTrajectorySamples - 1);
    Point z(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) z[i] = (1 - t) * z_old[i] + t * z_new[i];
    if (s == 0) z.assign(z_old.begin(), z_old.end());
    if (s + 1 == kTrajectorySamples) z.assign(z_new.begin(), z_new.end());
    seg.samples.push_back(projection.project(z));
  }
  seg.old_point = seg.samples.front();
  seg.new_point = seg.samples.back();
  seg.delta = masked_distance(z_old, target, included) - masked_distance(z_new, target, included);
  if (std::abs(seg.delta) < delta_threshold) {
    seg.cls = TrajectoryClass::kInsignificant;
  } else {
    seg.cls = seg.delta > 0 ? TrajectoryClass::kBetter : TrajectoryClass::kWorse;
  }
  return seg;
}

std::vector<Point2> declutter_layout(const std::vector<Point2>& input,
                                     const std::vector<int>& labels,
                                     const std::vector<double>& radii,
                                     const LayoutOptions& opt) {
  const std::size_t n = input.size();
  if (labels.size() != n || radii.size() != n) {
    throw Error(ErrorKind::kInvalidInput, "SHAPE_MISMATCH",
                "points, labels and radii must have equal length");
  }
  std::vector<Point2> p = input;
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  std::vector<Point2> centroid(static_cast<std::size_t>(max_label + 1), Point2{0, 0});
  std::vector<std::size_t> count(centroid.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) continue;
    auto k = static_cast<std::size_t>(labels[i]);
    centroid[k][0] += input[i][0];
    centroid[k][1] += input[i][1];
    ++count[k];
  }
  for (std::size_t k = 0; k < centroid.size(); ++k) {
    if (count[k] == 0) continue;
    centroid[k][0] /= static_cast<double>(count[k]);
    centroid[k][1] /= static_cast<double>(count[k]);
  }

  // One collision sweep; returns the worst remaining overlap ratio seen.
  auto sweep = [&]() {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double need = radii[i] + radii[j];
        if (need <= 0) continue;
        double dx = p[j][0] - p[i][0];
        double dy = p[j][1] - p[i][1];
        double d = std::sqrt(dx * dx + dy * dy);
        if (d >= need) continue;
        worst = std::max(worst, (need - d) / need);
        double ux, uy;
        if (d < 1e-12) {
          double angle = 2.399963229728653 * static_cast<double>(i * n + j);
          ux = std::cos(angle);
          uy = std::sin(angle);
        } else {
          ux = dx / d;
          uy = dy / d;
        }
        double push = (need - d) / 2;
        p[i][0] -= ux * push;
        p[i][1] -= uy * push;
        p[j][0] += ux * push;
        p[j][1] += uy * push;
      }
    }
    return worst;
  };

  auto max_overlap = [&]() {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double need = radii[i] + radii[j];
        if (need <= 0) continue;
        double d = std::hypot(p[j][0] - p[i][0], p[j][1] - p[i][1]);
        if (d < need) worst = std::max(worst, (need - d) / need);
      }
    }
    return worst;
  };

  for (std::size_t it = 0; it < opt.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] < 0) continue;
      const auto& c = centroid[static_cast<std::size_t>(labels[i])];
      p[i][0] += opt.stiffness * (c[0] - p[i][0]);
      p[i][1] += opt.stiffness * (c[1] - p[i][1]);
    }
    sweep();
  }
  for (std::size_t s = 0; s < opt.max_extra_sweeps && max_overlap() > opt.tolerance; ++s) {
    sweep();
  }
  return p;
}

}  // namespace promptscope::analytics
