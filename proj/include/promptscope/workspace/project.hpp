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
#ifndef PROMPTSCOPE_WORKSPACE_PROJECT_HPP_
#define PROMPTSCOPE_WORKSPACE_PROJECT_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/analytics/explore.hpp"
#include "promptscope/analytics/optics.hpp"
#include "promptscope/analytics/projection.hpp"
#include "promptscope/analytics/stats.hpp"
#include "promptscope/llm/gateway.hpp"
#include "promptscope/llm/prompt.hpp"
#include "promptscope/metrics/metrics.hpp"
#include "promptscope/workspace/cache.hpp"
#include "promptscope/workspace/dataset.hpp"

namespace promptscope::workspace {

inline constexpr int kFormatVersion = 1;

enum class RunScope { kBaseline, kValidation, kFull };
std::string_view scope_name(RunScope s);
RunScope parse_scope(std::string_view name);

enum class RunStatus { kRunning, kCompleted, kPartial, kFailed };
std::string_view status_name(RunStatus s);
RunStatus parse_status(std::string_view name);

nlohmann::json scores_to_json(const metrics::FeatureScores& s);
metrics::FeatureScores scores_from_json(const nlohmann::json& j);

struct DocumentOutput {
  std::string doc_id;
  std::string summary;
  std::optional<metrics::FeatureScores> scores;
  metrics::FeatureLevels levels{};
  std::string error;  // empty on success
  bool cached = false;

  bool ok() const { return error.empty() && scores.has_value(); }
};

struct RunRecord {
  int id = 0;
  int version_id = 0;
  RunScope scope = RunScope::kFull;
  RunStatus status = RunStatus::kRunning;
  std::string backend_id;
  std::string model;
  double temperature = 0;
  std::string created;
  std::string error;  // run-level failure
  std::vector<DocumentOutput> outputs;
  std::size_t backend_calls = 0;

  const DocumentOutput* find(std::string_view doc_id) const;
  std::size_t succeeded() const;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

struct PromptVersion {
  int id = 0;
  llm::PromptBlocks blocks;
  std::optional<int> parent;
  std::string created;
  std::vector<std::string> starred;  // snapshot at creation
  std::string note;

  nlohmann::json to_json() const;
  static PromptVersion from_json(const nlohmann::json& j);
};

// Everything fixed by the baseline run and reused verbatim afterwards.
struct BaselineState {
  int run_id = 0;
  std::vector<std::string> ids;               // training order
  std::vector<analytics::FeatureRow> rows;    // raw values
  std::vector<analytics::FeatureRow> z;       // standardized with stats
  analytics::BaselineStats stats;
  metrics::NaturalnessScale naturalness;
  analytics::ClusterModel clusters;
  analytics::ProjectionModel projection;
  std::vector<analytics::ValidationEntry> validation;

  std::optional<std::size_t> index_of(std::string_view id) const;
  std::vector<std::string> validation_ids() const;
};

struct ProjectSettings {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  metrics::MetricConfig metrics;
  analytics::OpticsParams optics;
  double significance = analytics::kDefaultSignificance;
  double correlation_threshold = analytics::kDefaultCorrelationThreshold;

  nlohmann::json to_json() const;
  static ProjectSettings from_json(const nlohmann::json& j);
};

// Work list for one run, computed against a snapshot of the project.
struct RunPlan {
  int version_id = 0;
  RunScope scope = RunScope::kFull;
  std::string backend_id;
  std::string model;
  double temperature = 0;
  struct Item {
    std::string doc_id;
    std::string article;
    std::vector<llm::Message> messages;
    std::string cache_key;
  };
  std::vector<Item> items;
  llm::PromptBlocks blocks;
  std::optional<metrics::NaturalnessScale> naturalness;  // frozen, absent for baseline
  metrics::MetricConfig metrics;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

class ProjectLock;

class Project {
 public:
  // An empty dir keeps the project in memory only.
  static Project create(const std::filesystem::path& dir, Dataset dataset,
                        ProjectSettings settings = {});
  // Opens for writing and takes the project lock (PROJECT_LOCKED if held).
  static Project open(const std::filesystem::path& dir);
  // Read-only snapshot; save() is refused.
  static Project load(const std::filesystem::path& dir);

  Project(Project&&) noexcept;
  Project& operator=(Project&&) noexcept;
  ~Project();

  void save() const;
  const std::filesystem::path& dir() const { return dir_; }
  bool read_only() const { return read_only_; }

  const Dataset& dataset() const { return dataset_; }
  const ProjectSettings& settings() const { return settings_; }
  void set_settings(ProjectSettings s);

  const std::vector<PromptVersion>& versions() const { return versions_; }
  const PromptVersion& version(int id) const;
  // The first version is the root and has no parent; every later one needs
  // an existing parent.
  int add_version(llm::PromptBlocks blocks, std::optional<int> parent, std::string note = {});
  void update_version(int id, llm::PromptBlocks blocks, std::string note);
  void delete_version(int id);

  const std::vector<RunRecord>& runs() const { return runs_; }
  const RunRecord& run(int id) const;
  // Latest successful output for a document under a version, if any.
  const DocumentOutput* latest_output(int version_id, std::string_view doc_id) const;

  bool has_baseline() const { return baseline_.has_value(); }
  const BaselineState& baseline() const;  // throws NO_BASELINE

  const std::optional<analytics::FeatureConfig>& config() const { return config_; }
  void set_config(analytics::FeatureConfig config);

  const std::vector<std::string>& starred() const { return starred_; }
  void star(const std::string& doc_id);
  void unstar(const std::string& doc_id);

  // Run lifecycle: plan under the caller's lock, execute without it, then
  // commit. run_prompt does all three.
  RunPlan plan_run(int version_id, RunScope scope, const std::string& backend_id) const;
  int reserve_run(const RunPlan& plan);
  void commit_run(int run_id, RunRecord record);
  RunRecord run_prompt(int version_id, RunScope scope, llm::Gateway& gateway,
                       const ProgressFn& progress = {});

  OutputCache& cache() const { return *cache_; }

  // Full state as JSON, used for round-trip comparison and export.
  nlohmann::json state_json() const;

 private:
  Project() = default;
  void freeze_baseline(RunRecord& record);
  void check_writable() const;

  std::filesystem::path dir_;
  bool read_only_ = false;
  std::unique_ptr<ProjectLock> lock_;
  Dataset dataset_;
  ProjectSettings settings_;
  std::vector<PromptVersion> versions_;
  std::vector<RunRecord> runs_;
  std::optional<BaselineState> baseline_;
  std::optional<analytics::FeatureConfig> config_;
  std::vector<std::string> starred_;
  int next_version_id_ = 1;
  int next_run_id_ = 1;
  std::unique_ptr<OutputCache> cache_;
};

// Executes a plan. Touches no project state, so it may run without the
// project lock. Backend failures are recorded per document.
RunRecord execute_run(const RunPlan& plan, llm::Gateway& gateway, OutputCache& cache,
                      const ProgressFn& progress = {});

}  // namespace promptscope::workspace

#endif  // PROMPTSCOPE_WORKSPACE_PROJECT_HPP_
