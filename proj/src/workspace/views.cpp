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
#include "promptscope/workspace/views.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "promptscope/common/error.hpp"
#include "promptscope/metrics/levels.hpp"

namespace promptscope::workspace {
namespace {

using analytics::FeatureRow;
using metrics::Feature;
using nlohmann::json;

const analytics::FeatureConfig& require_config(const Project& p) {
  if (!p.config()) {
    throw Error(ErrorKind::kPrecondition, "NO_CONFIG", "no feature configuration",
                "set a feature configuration first");
  }
  return *p.config();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval_json(const std::optional<std::array<double, 2>>& r) {
  if (!r) return nullptr;
  return json::array({finite_or_null((*r)[0]), finite_or_null((*r)[1])});
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Globals {
  FeatureRow min{}, max{}, mean{};
};

Globals globals(const std::vector<FeatureRow>& rows) {
  Globals g;
  if (rows.empty()) return g;
  g.min = g.max = rows[0];
  for (const auto& r : rows) {
    for (std::size_t f = 0; f < r.size(); ++f) {
      g.min[f] = std::min(g.min[f], r[f]);
      g.max[f] = std::max(g.max[f], r[f]);
      g.mean[f] += r[f];
    }
  }
  for (auto& m : g.mean) m /= static_cast<double>(rows.size());
  return g;
}

}  // namespace

std::vector<ClusterPoint> cluster_points(const Project& p) {
  const auto& b = p.baseline();
  std::vector<ClusterPoint> out;
  for (std::size_t i = 0; i < b.ids.size(); ++i) {
    out.push_back({b.ids[i], b.projection.coordinates[i], b.clusters.labels[i]});
  }
  return out;
}

std::vector<FeatureDistribution> feature_distributions(const Project& p) {
  const auto& b = p.baseline();
  auto g = globals(b.rows);
  std::vector<FeatureDistribution> out;
  for (std::size_t f = 0; f < metrics::kFeatureCount; ++f) {
    FeatureDistribution d;
    d.feature = metrics::kAllFeatures[f];
    d.global_min = g.min[f];
    d.global_max = g.max[f];
    d.global_mean = g.mean[f];
    for (std::size_t k = 0; k < b.clusters.cluster_count(); ++k) {
      auto mem = b.clusters.members(static_cast<int>(k));
      std::array<double, 2> r = {std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity()};
      for (auto i : mem) {
        r[0] = std::min(r[0], b.rows[i][f]);
        r[1] = std::max(r[1], b.rows[i][f]);
      }
      d.per_cluster.push_back(r);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::array<double, 2> target_interval(Feature f, const analytics::FeatureTarget& t) {
  if (t.range) return *t.range;
  if (t.level) {
    auto r = metrics::level_range(f, *t.level);
    const auto& names = metrics::level_names(f);
    double lo = names.front() == *t.level ? -std::numeric_limits<double>::infinity() : r.lower;
    return {lo, r.upper};
  }
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

ExampleRecommendations recommend_examples(const Project& p) {
  const auto& b = p.baseline();
  const auto& config = require_config(p);
  ExampleRecommendations rec;
  rec.match = analytics::match_cluster(config, b.clusters, b.rows);
  auto g = globals(b.rows);
  const auto& base_run = p.run(b.run_id);
  const auto mask = config.included_mask();
  const auto included = std::count(mask.begin(), mask.end(), true);

  for (auto i : b.clusters.members(rec.match.cluster)) {
    ExampleCard card;
    card.doc_id = b.ids[i];
    if (const auto* o = base_run.find(card.doc_id)) card.summary = o->summary;
    card.starred = std::find(p.starred().begin(), p.starred().end(), card.doc_id) !=
                   p.starred().end();
    std::size_t hits = 0;
    for (std::size_t f = 0; f < metrics::kFeatureCount; ++f) {
      const auto& t = config.targets[f];
      FeatureBar bar;
      bar.feature = metrics::kAllFeatures[f];
      bar.value = b.rows[i][f];
      bar.scaled = analytics::profile_scale(bar.value, g.min[f], g.mean[f], g.max[f]);
      bar.included = t.included;
      if (t.included) {
        bar.in_target = t.contains(bar.feature, bar.value);
        hits += bar.in_target;
        auto iv = target_interval(bar.feature, t);
        bar.target_scaled = std::array<double, 2>{
            analytics::profile_scale(std::max(iv[0], g.min[f]), g.min[f], g.mean[f], g.max[f]),
            analytics::profile_scale(std::min(iv[1], g.max[f]), g.min[f], g.mean[f], g.max[f])};
      }
      card.bars.push_back(bar);
    }
    card.fit = included ? static_cast<double>(hits) / static_cast<double>(included) : 0.0;
    rec.cards.push_back(std::move(card));
  }
  std::stable_sort(rec.cards.begin(), rec.cards.end(),
                   [](const auto& a, const auto& b) { return a.fit > b.fit; });
  return rec;
}

DotPlot dot_plot(const Project& p, int version_id) {
  const auto& b = p.baseline();
  p.version(version_id);
  DotPlot plot;
  plot.version_id = version_id;
  const auto* config = p.config() ? &*p.config() : nullptr;
  for (std::size_t f = 0; f < metrics::kFeatureCount; ++f) {
    DotRow row;
    row.feature = metrics::kAllFeatures[f];
    if (config && config->targets[f].included) {
      row.included = true;
      row.band = target_interval(row.feature, config->targets[f]);
    }
    plot.rows.push_back(std::move(row));
  }
  for (const auto& v : b.validation) {
    const auto& id = b.ids[v.index];
    const auto* o = p.latest_output(version_id, id);
    if (!o) {
      plot.missing.push_back(id);
      continue;
    }
    auto values = o->scores->values();
    for (std::size_t f = 0; f < metrics::kFeatureCount; ++f) {
      Dot d{id, values[f], v.weight, false};
      if (plot.rows[f].included) d.in_band = config->targets[f].contains(plot.rows[f].feature, d.value);
      plot.rows[f].dots.push_back(d);
    }
  }
  return plot;
}

Comparison compare_versions(const Project& p, int old_version, int new_version) {
  const auto& b = p.baseline();
  const auto& config = require_config(p);
  p.version(old_version);
  p.version(new_version);
  Comparison c;
  c.old_version = old_version;
  c.new_version = new_version;
  auto match = analytics::match_cluster(config, b.clusters, b.rows);
  c.target_cluster = match.cluster;
  auto members = b.clusters.members(match.cluster);
  for (auto i : members) {
    for (std::size_t f = 0; f < metrics::kFeatureCount; ++f) c.target_z[f] += b.z[i][f];
    c.target_points.push_back(b.projection.coordinates[i]);
  }
  for (auto& v : c.target_z) v /= static_cast<double>(members.size());
  const auto mask = config.included_mask();

  for (const auto& v : b.validation) {
    const auto& id = b.ids[v.index];
    const auto* o = p.latest_output(old_version, id);
    const auto* n = p.latest_output(new_version, id);
    if (!o || !n) {
      c.missing.push_back(id);
      continue;
    }
    auto seg = analytics::sample_trajectory(b.projection, b.stats.standardize(o->scores->values()),
                                            b.stats.standardize(n->scores->values()), c.target_z,
                                            mask, p.settings().significance);
    seg.case_id = id;
    seg.weight = v.weight;
    switch (seg.cls) {
      case analytics::TrajectoryClass::kBetter: ++c.better; break;
      case analytics::TrajectoryClass::kWorse: ++c.worse; break;
      case analytics::TrajectoryClass::kInsignificant: ++c.insignificant; break;
    }
    c.trajectories.push_back(std::move(seg));
  }
  return c;
}

std::string export_csv(const Project& p) {
  std::ostringstream os;
  os.precision(17);
  os << "run_id,version_id,scope,doc_id,status,summary";
  for (auto f : metrics::kAllFeatures) os << ',' << metrics::feature_name(f);
  for (auto f : metrics::kAllFeatures) os << ',' << metrics::feature_name(f) << "_level";
  os << '\n';
  for (const auto& r : p.runs()) {
    for (const auto& d : p.dataset().documents()) {
      const auto* o = r.find(d.id);
      os << r.id << ',' << r.version_id << ',' << scope_name(r.scope) << ',' << csv_field(d.id)
         << ',';
      if (!o) {
        os << "absent,";
        for (std::size_t i = 0; i < 2 * metrics::kFeatureCount; ++i) os << ',';
      } else if (!o->ok()) {
        os << "error," << csv_field(o->summary);
        for (std::size_t i = 0; i < 2 * metrics::kFeatureCount; ++i) os << ',';
      } else {
        os << "ok," << csv_field(o->summary);
        for (auto f : metrics::kAllFeatures) {
          os << ',';
          if (f != Feature::kNaturalness || o->scores->naturalness) os << o->scores->value(f);
        }
        for (const auto& l : o->levels) os << ',' << csv_field(l);
      }
      os << '\n';
    }
  }
  return os.str();
}

json to_json(const ClusterPoint& c) {
  return {{"doc_id", c.doc_id}, {"x", c.xy[0]}, {"y", c.xy[1]}, {"cluster", c.cluster},
          {"noise", c.cluster == analytics::kNoise}};
}

json to_json(const FeatureDistribution& d) {
  json per = json::array();
  for (const auto& r : d.per_cluster) per.push_back({finite_or_null(r[0]), finite_or_null(r[1])});
  return {{"feature", metrics::feature_name(d.feature)},
          {"min", d.global_min},
          {"max", d.global_max},
          {"mean", d.global_mean},
          {"clusters", per}};
}

json to_json(const ExampleRecommendations& r) {
  json cards = json::array();
  for (const auto& c : r.cards) {
    json bars = json::array();
    for (const auto& b : c.bars) {
      bars.push_back({{"feature", metrics::feature_name(b.feature)},
                      {"value", b.value},
                      {"scaled", b.scaled},
                      {"included", b.included},
                      {"in_target", b.in_target},
                      {"target_scaled", interval_json(b.target_scaled)}});
    }
    cards.push_back({{"doc_id", c.doc_id},
                     {"summary", c.summary},
                     {"fit", c.fit},
                     {"starred", c.starred},
                     {"bars", bars}});
  }
  return {{"cluster", r.match.cluster}, {"fit", r.match.fit}, {"fits", r.match.fits},
          {"examples", cards}};
}

json to_json(const DotPlot& d) {
  json rows = json::array();
  for (const auto& r : d.rows) {
    json dots = json::array();
    for (const auto& dot : r.dots) {
      dots.push_back({{"doc_id", dot.doc_id},
                      {"value", dot.value},
                      {"weight", dot.weight},
                      {"in_band", dot.in_band}});
    }
    rows.push_back({{"feature", metrics::feature_name(r.feature)},
                    {"included", r.included},
                    {"band", interval_json(r.band)},
                    {"dots", dots}});
  }
  return {{"version_id", d.version_id}, {"rows", rows}, {"missing", d.missing}};
}

json to_json(const Comparison& c) {
  json segs = json::array();
  for (const auto& s : c.trajectories) {
    json samples = json::array();
    for (const auto& pt : s.samples) samples.push_back({pt[0], pt[1]});
    segs.push_back({{"case_id", s.case_id},
                    {"weight", s.weight},
                    {"old", {s.old_point[0], s.old_point[1]}},
                    {"new", {s.new_point[0], s.new_point[1]}},
                    {"delta", s.delta},
                    {"class", analytics::trajectory_class_name(s.cls)},
                    {"samples", samples}});
  }
  json target = json::array();
  for (const auto& pt : c.target_points) target.push_back({pt[0], pt[1]});
  return {{"old_version", c.old_version},
          {"new_version", c.new_version},
          {"target_cluster", c.target_cluster},
          {"target_z", c.target_z},
          {"target_points", target},
          {"trajectories", segs},
          {"missing", c.missing},
          {"counts", {{"better", c.better}, {"worse", c.worse}, {"insignificant", c.insignificant}}}};
}

json to_json(const analytics::CorrelationMatrix& m) {
  json names = json::array(), r = json::array(), sig = json::array();
  for (auto f : metrics::kAllFeatures) names.push_back(metrics::feature_name(f));
  for (std::size_t i = 0; i < metrics::kFeatureCount; ++i) {
    r.push_back(std::vector<double>(m.r[i].begin(), m.r[i].end()));
    sig.push_back(std::vector<bool>(m.significant[i].begin(), m.significant[i].end()));
  }
  return {{"features", names}, {"r", r}, {"significant", sig}};
}

json to_json(const analytics::ClusterProfile& pr) {
  auto arr = [](const FeatureRow& row) { return std::vector<double>(row.begin(), row.end()); };
  return {{"cluster", pr.cluster}, {"lower", arr(pr.lower)}, {"upper", arr(pr.upper)},
          {"mean", arr(pr.mean)}};
}

}  // namespace promptscope::workspace
