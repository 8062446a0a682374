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
#include "promptscope/workspace/project.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/text/tokenizer.hpp"

namespace promptscope::workspace {
namespace fs = std::filesystem;
using nlohmann::json;

class ProjectLock {
 public:
  explicit ProjectLock(const fs::path& dir) {
    auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) {
      throw Error(ErrorKind::kUnavailable, "PROJECT_LOCKED", "cannot open project lock",
                  path.string());
    }
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw Error(ErrorKind::kPrecondition, "PROJECT_LOCKED", "project locked",
                  "another writer holds " + path.string());
    }
  }
  ~ProjectLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  int fd_ = -1;
};

namespace {

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Error not_found(const std::string& what, int id) {
  return Error(ErrorKind::kNotFound, "UNKNOWN_" + what,
               "unknown " + std::string(what == "VERSION" ? "version" : "run") + " " +
                   std::to_string(id));
}

Error no_baseline() {
  return Error(ErrorKind::kPrecondition, "NO_BASELINE", "no baseline",
               "run the baseline prompt first");
}

Error frozen(const std::string& what) {
  return Error(ErrorKind::kPrecondition, "BASELINE_FROZEN", "baseline already frozen", what);
}

json row_json(const analytics::FeatureRow& r) { return json(std::vector<double>(r.begin(), r.end())); }

analytics::FeatureRow row_from(const json& j) {
  analytics::FeatureRow r{};
  if (!j.is_array() || j.size() != r.size()) {
    throw Error(ErrorKind::kInvalidInput, "PROJECT_FILE_INVALID", "feature row has wrong length");
  }
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = j[i].get<double>();
  return r;
}

std::vector<analytics::Point> as_points(const std::vector<analytics::FeatureRow>& rows) {
  std::vector<analytics::Point> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}

json read_json(const fs::path& path) {
  auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "PROJECT_FILE_INVALID",
                "invalid project file " + path.filename().string(), e.what());
  }
}

fs::path run_file(const fs::path& dir, int id) {
  return dir / "runs" / ("run-" + std::to_string(id) + ".json");
}

json baseline_json(const BaselineState& b) {
  json rows = json::array(), z = json::array(), val = json::array();
  for (const auto& r : b.rows) rows.push_back(row_json(r));
  for (const auto& r : b.z) z.push_back(row_json(r));
  for (const auto& v : b.validation) {
    val.push_back({{"index", v.index}, {"weight", v.weight}, {"cluster", v.cluster}});
  }
  return {{"run_id", b.run_id},
          {"ids", b.ids},
          {"rows", rows},
          {"z", z},
          {"stats", b.stats.to_json()},
          {"naturalness", {{"min", b.naturalness.min}, {"max", b.naturalness.max}}},
          {"validation", val}};
}

void baseline_from(const json& j, BaselineState& b) {
  b.run_id = j.at("run_id").get<int>();
  b.ids = j.at("ids").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) b.rows.push_back(row_from(r));
  for (const auto& r : j.at("z")) b.z.push_back(row_from(r));
  b.stats = analytics::BaselineStats::from_json(j.at("stats"));
  b.naturalness.min = j.at("naturalness").at("min").get<double>();
  b.naturalness.max = j.at("naturalness").at("max").get<double>();
  for (const auto& v : j.at("validation")) {
    b.validation.push_back({v.at("index").get<std::size_t>(), v.at("weight").get<std::size_t>(),
                            v.at("cluster").get<int>()});
  }
}

}  // namespace

// ---- enums and records ----

std::string_view scope_name(RunScope s) {
  switch (s) {
    case RunScope::kBaseline: return "baseline";
    case RunScope::kValidation: return "validation";
    case RunScope::kFull: return "full";
  }
  return {};
}

RunScope parse_scope(std::string_view name) {
  for (auto s : {RunScope::kBaseline, RunScope::kValidation, RunScope::kFull}) {
    if (scope_name(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidInput, "INVALID_SCOPE", "unknown scope '" + std::string(name) + "'",
              "expected baseline, validation or full");
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kRunning: return "running";
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kPartial: return "partial";
    case RunStatus::kFailed: return "failed";
  }
  return {};
}

RunStatus parse_status(std::string_view name) {
  for (auto s : {RunStatus::kRunning, RunStatus::kCompleted, RunStatus::kPartial,
                 RunStatus::kFailed}) {
    if (status_name(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidInput, "PROJECT_FILE_INVALID",
              "unknown run status '" + std::string(name) + "'");
}

json scores_to_json(const metrics::FeatureScores& s) {
  return {{"complexity", s.complexity},
          {"formality", s.formality},
          {"sentiment", s.sentiment},
          {"faithfulness", s.faithfulness},
          {"naturalness_raw", s.naturalness_raw},
          {"naturalness", s.naturalness ? json(*s.naturalness) : json(nullptr)},
          {"length", s.length},
          {"naturalness_features", s.naturalness_features}};
}

metrics::FeatureScores scores_from_json(const json& j) {
  metrics::FeatureScores s;
  s.complexity = j.at("complexity").get<double>();
  s.formality = j.at("formality").get<double>();
  s.sentiment = j.at("sentiment").get<double>();
  s.faithfulness = j.at("faithfulness").get<double>();
  s.naturalness_raw = j.at("naturalness_raw").get<double>();
  if (!j.at("naturalness").is_null()) s.naturalness = j["naturalness"].get<double>();
  s.length = j.at("length").get<std::size_t>();
  s.naturalness_features = j.at("naturalness_features").get<metrics::NaturalnessFeatures>();
  return s;
}

const DocumentOutput* RunRecord::find(std::string_view doc_id) const {
  for (const auto& o : outputs) {
    if (o.doc_id == doc_id) return &o;
  }
  return nullptr;
}

std::size_t RunRecord::succeeded() const {
  return static_cast<std::size_t>(
      std::count_if(outputs.begin(), outputs.end(), [](const auto& o) { return o.ok(); }));
}

json RunRecord::to_json() const {
  json outs = json::array();
  for (const auto& o : outputs) {
    json e = {{"doc_id", o.doc_id}, {"summary", o.summary}, {"cached", o.cached}};
    e["scores"] = o.scores ? scores_to_json(*o.scores) : json(nullptr);
    e["levels"] = o.scores && !o.levels[0].empty() ? json(o.levels) : json(nullptr);
    e["error"] = o.error;
    outs.push_back(std::move(e));
  }
  return {{"id", id},
          {"version_id", version_id},
          {"scope", scope_name(scope)},
          {"status", status_name(status)},
          {"backend_id", backend_id},
          {"model", model},
          {"temperature", temperature},
          {"created", created},
          {"error", error},
          {"backend_calls", backend_calls},
          {"outputs", outs}};
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  r.id = j.at("id").get<int>();
  r.version_id = j.at("version_id").get<int>();
  r.scope = parse_scope(j.at("scope").get<std::string>());
  r.status = parse_status(j.at("status").get<std::string>());
  r.backend_id = j.at("backend_id").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.temperature = j.at("temperature").get<double>();
  r.created = j.at("created").get<std::string>();
  r.error = j.value("error", "");
  r.backend_calls = j.value("backend_calls", std::size_t{0});
  for (const auto& e : j.at("outputs")) {
    DocumentOutput o;
    o.doc_id = e.at("doc_id").get<std::string>();
    o.summary = e.at("summary").get<std::string>();
    o.cached = e.value("cached", false);
    if (!e.at("scores").is_null()) o.scores = scores_from_json(e["scores"]);
    if (e.contains("levels") && !e["levels"].is_null()) {
      o.levels = e["levels"].get<metrics::FeatureLevels>();
    }
    o.error = e.value("error", "");
    r.outputs.push_back(std::move(o));
  }
  return r;
}

json PromptVersion::to_json() const {
  return {{"id", id},
          {"blocks", blocks.to_json()},
          {"parent", parent ? json(*parent) : json(nullptr)},
          {"created", created},
          {"starred", starred},
          {"note", note}};
}

PromptVersion PromptVersion::from_json(const json& j) {
  PromptVersion v;
  v.id = j.at("id").get<int>();
  v.blocks = llm::PromptBlocks::from_json(j.at("blocks"));
  if (!j.at("parent").is_null()) v.parent = j["parent"].get<int>();
  v.created = j.at("created").get<std::string>();
  v.starred = j.at("starred").get<std::vector<std::string>>();
  v.note = j.value("note", "");
  return v;
}

std::optional<std::size_t> BaselineState::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> BaselineState::validation_ids() const {
  std::vector<std::string> out;
  for (const auto& v : validation) out.push_back(ids[v.index]);
  return out;
}

json ProjectSettings::to_json() const {
  return {{"model", model},
          {"temperature", temperature},
          {"metrics", metrics.to_json()},
          {"optics",
           {{"min_samples", optics.min_samples},
            {"xi", optics.xi},
            {"outlier_factor", optics.outlier_factor}}},
          {"significance", significance},
          {"correlation_threshold", correlation_threshold}};
}

ProjectSettings ProjectSettings::from_json(const json& j) {
  ProjectSettings s;
  s.model = j.value("model", s.model);
  s.temperature = j.value("temperature", s.temperature);
  if (j.contains("metrics")) s.metrics = metrics::MetricConfig::from_json(j["metrics"]);
  if (j.contains("optics")) {
    const auto& o = j["optics"];
    s.optics.min_samples = o.value("min_samples", s.optics.min_samples);
    s.optics.xi = o.value("xi", s.optics.xi);
    s.optics.outlier_factor = o.value("outlier_factor", s.optics.outlier_factor);
  }
  s.significance = j.value("significance", s.significance);
  s.correlation_threshold = j.value("correlation_threshold", s.correlation_threshold);
  return s;
}

// ---- project lifecycle ----

Project::Project(Project&&) noexcept = default;
Project& Project::operator=(Project&&) noexcept = default;
Project::~Project() = default;

Project Project::create(const fs::path& dir, Dataset dataset, ProjectSettings settings) {
  Project p;
  p.dir_ = dir;
  p.dataset_ = std::move(dataset);
  p.settings_ = std::move(settings);
  if (dir.empty()) {
    p.cache_ = std::make_unique<OutputCache>();
    return p;
  }
  if (fs::exists(dir / "project.json")) {
    throw Error(ErrorKind::kPrecondition, "PROJECT_EXISTS", "project already exists",
                dir.string());
  }
  fs::create_directories(dir / "runs");
  p.lock_ = std::make_unique<ProjectLock>(dir);
  p.cache_ = std::make_unique<OutputCache>(dir / "cache");
  p.save();
  return p;
}

Project Project::open(const fs::path& dir) {
  auto lock = std::make_unique<ProjectLock>(dir);
  Project p = load(dir);
  p.read_only_ = false;
  p.lock_ = std::move(lock);
  return p;
}

Project Project::load(const fs::path& dir) {
  Project p;
  p.dir_ = dir;
  p.read_only_ = true;
  json meta = read_json(dir / "project.json");
  if (meta.value("format_version", -1) != kFormatVersion) {
    throw Error(ErrorKind::kInvalidInput, "INCOMPATIBLE_PROJECT", "incompatible project",
                "expected format_version " + std::to_string(kFormatVersion));
  }
  try {
    p.settings_ = ProjectSettings::from_json(meta.at("settings"));
    p.dataset_ = Dataset::load(dir / "documents.jsonl");
    for (const auto& v : read_json(dir / "versions.json")) {
      p.versions_.push_back(PromptVersion::from_json(v));
    }
    for (const auto& id : meta.at("runs")) {
      auto r = RunRecord::from_json(read_json(run_file(dir, id.get<int>())));
      if (r.status == RunStatus::kRunning) {
        r.status = RunStatus::kFailed;
        r.error = "interrupted";
      }
      p.runs_.push_back(std::move(r));
    }
    if (!meta.at("baseline_run").is_null()) {
      BaselineState b;
      baseline_from(read_json(dir / "stats.json"), b);
      b.clusters = analytics::ClusterModel::from_json(read_json(dir / "clusters.json"));
      b.projection = analytics::ProjectionModel::from_json(read_json(dir / "projection.json"));
      p.baseline_ = std::move(b);
    }
    if (!meta.at("config").is_null()) {
      p.config_ = analytics::FeatureConfig::from_json(meta["config"]);
    }
    p.starred_ = meta.at("starred").get<std::vector<std::string>>();
    p.next_version_id_ = meta.at("next_version_id").get<int>();
    p.next_run_id_ = meta.at("next_run_id").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "PROJECT_FILE_INVALID", "invalid project file",
                e.what());
  }
  p.cache_ = std::make_unique<OutputCache>(dir / "cache");
  return p;
}

void Project::check_writable() const {
  if (read_only_) {
    throw Error(ErrorKind::kPrecondition, "READ_ONLY", "project opened read-only");
  }
}

void Project::save() const {
  check_writable();
  if (dir_.empty()) return;
  fs::create_directories(dir_ / "runs");
  json run_ids = json::array();
  for (const auto& r : runs_) {
    write_file_atomic(run_file(dir_, r.id), r.to_json().dump(1));
    run_ids.push_back(r.id);
  }
  write_file_atomic(dir_ / "documents.jsonl", dataset_.to_jsonl());
  json versions = json::array();
  for (const auto& v : versions_) versions.push_back(v.to_json());
  write_file_atomic(dir_ / "versions.json", versions.dump(1));
  if (baseline_) {
    write_file_atomic(dir_ / "stats.json", baseline_json(*baseline_).dump(1));
    write_file_atomic(dir_ / "clusters.json", baseline_->clusters.to_json().dump(1));
    write_file_atomic(dir_ / "projection.json", baseline_->projection.to_json().dump(1));
  }
  json meta = {{"format_version", kFormatVersion},
               {"settings", settings_.to_json()},
               {"baseline_run", baseline_ ? json(baseline_->run_id) : json(nullptr)},
               {"config", config_ ? config_->to_json() : json(nullptr)},
               {"starred", starred_},
               {"next_version_id", next_version_id_},
               {"next_run_id", next_run_id_},
               {"runs", run_ids}};
  write_file_atomic(dir_ / "project.json", meta.dump(1));
}

json Project::state_json() const {
  json versions = json::array(), runs = json::array();
  for (const auto& v : versions_) versions.push_back(v.to_json());
  for (const auto& r : runs_) runs.push_back(r.to_json());
  json baseline = nullptr;
  if (baseline_) {
    baseline = baseline_json(*baseline_);
    baseline["clusters"] = baseline_->clusters.to_json();
    baseline["projection"] = baseline_->projection.to_json();
  }
  return {{"format_version", kFormatVersion},
          {"settings", settings_.to_json()},
          {"documents", dataset_.to_jsonl()},
          {"versions", versions},
          {"runs", runs},
          {"baseline", baseline},
          {"config", config_ ? config_->to_json() : json(nullptr)},
          {"starred", starred_},
          {"next_version_id", next_version_id_},
          {"next_run_id", next_run_id_}};
}

void Project::set_settings(ProjectSettings s) {
  if (baseline_ && (s.metrics.to_json() != settings_.metrics.to_json() ||
                    s.optics.min_samples != settings_.optics.min_samples ||
                    s.optics.xi != settings_.optics.xi ||
                    s.optics.outlier_factor != settings_.optics.outlier_factor)) {
    throw frozen("metric and clustering settings are fixed by the baseline");
  }
  settings_ = std::move(s);
}

// ---- versions ----

const PromptVersion& Project::version(int id) const {
  for (const auto& v : versions_) {
    if (v.id == id) return v;
  }
  throw not_found("VERSION", id);
}

int Project::add_version(llm::PromptBlocks blocks, std::optional<int> parent, std::string note) {
  blocks.validate();
  if (versions_.empty()) {
    if (parent) {
      throw Error(ErrorKind::kInvalidInput, "INVALID_PARENT", "the first version has no parent");
    }
  } else {
    if (!parent) {
      throw Error(ErrorKind::kInvalidInput, "INVALID_PARENT", "parent version required");
    }
    version(*parent);
  }
  PromptVersion v;
  v.id = next_version_id_++;
  v.blocks = std::move(blocks);
  v.parent = parent;
  v.created = now_utc();
  v.starred = starred_;
  v.note = std::move(note);
  versions_.push_back(std::move(v));
  return versions_.back().id;
}

void Project::update_version(int id, llm::PromptBlocks blocks, std::string note) {
  version(id);
  blocks.validate();
  for (const auto& r : runs_) {
    if (r.version_id == id) {
      throw Error(ErrorKind::kPrecondition, "VERSION_IMMUTABLE",
                  "version " + std::to_string(id) + " has runs and cannot change");
    }
  }
  for (auto& v : versions_) {
    if (v.id == id) {
      v.blocks = std::move(blocks);
      v.note = std::move(note);
    }
  }
}

void Project::delete_version(int id) {
  version(id);
  for (const auto& r : runs_) {
    if (r.version_id == id) {
      throw Error(ErrorKind::kPrecondition, "VERSION_IMMUTABLE",
                  "version " + std::to_string(id) + " has runs and cannot be deleted");
    }
  }
  for (const auto& v : versions_) {
    if (v.parent == id) {
      throw Error(ErrorKind::kPrecondition, "VERSION_HAS_CHILDREN",
                  "version " + std::to_string(id) + " has child versions");
    }
  }
  versions_.erase(std::remove_if(versions_.begin(), versions_.end(),
                                 [&](const auto& v) { return v.id == id; }),
                  versions_.end());
}

// ---- runs ----

const RunRecord& Project::run(int id) const {
  for (const auto& r : runs_) {
    if (r.id == id) return r;
  }
  throw not_found("RUN", id);
}

const DocumentOutput* Project::latest_output(int version_id, std::string_view doc_id) const {
  for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) {
    if (it->version_id != version_id || it->status == RunStatus::kRunning) continue;
    if (const auto* o = it->find(doc_id); o && o->ok()) return o;
  }
  return nullptr;
}

const BaselineState& Project::baseline() const {
  if (!baseline_) throw no_baseline();
  return *baseline_;
}

void Project::set_config(analytics::FeatureConfig config) {
  config.validate();
  config_ = std::move(config);
}

void Project::star(const std::string& doc_id) {
  const auto& b = baseline();
  if (!b.index_of(doc_id)) {
    throw Error(ErrorKind::kInvalidInput, "NOT_BASELINE_SUMMARY",
                "'" + doc_id + "' has no baseline summary");
  }
  if (std::find(starred_.begin(), starred_.end(), doc_id) == starred_.end()) {
    starred_.push_back(doc_id);
  }
}

void Project::unstar(const std::string& doc_id) {
  starred_.erase(std::remove(starred_.begin(), starred_.end(), doc_id), starred_.end());
}

RunPlan Project::plan_run(int version_id, RunScope scope, const std::string& backend_id) const {
  const auto& v = version(version_id);
  RunPlan plan;
  plan.version_id = version_id;
  plan.scope = scope;
  plan.backend_id = backend_id;
  plan.model = settings_.model;
  plan.temperature = settings_.temperature;
  plan.blocks = v.blocks;
  plan.metrics = settings_.metrics;

  std::vector<std::string> ids;
  if (scope == RunScope::kBaseline) {
    if (v.parent) {
      throw Error(ErrorKind::kInvalidInput, "INVALID_SCOPE",
                  "only the root version runs as the baseline");
    }
    if (baseline_) throw frozen("the baseline run already completed");
    for (const auto& d : dataset_.documents()) ids.push_back(d.id);
  } else {
    const auto& b = baseline();
    plan.naturalness = b.naturalness;
    if (scope == RunScope::kValidation) {
      if (b.validation.empty()) {
        throw Error(ErrorKind::kPrecondition, "NO_CLUSTERS", "no clusters",
                    "the baseline produced no clusters, so there is no validation set");
      }
      ids = b.validation_ids();
    } else {
      for (const auto& d : dataset_.documents()) ids.push_back(d.id);
    }
  }

  std::vector<std::string> examples;
  if (!v.starred.empty()) {
    const auto& b = baseline();
    const auto& base_run = run(b.run_id);
    for (const auto& id : v.starred) {
      if (const auto* o = base_run.find(id); o && o->ok()) examples.push_back(o->summary);
    }
  }
  for (const auto& id : ids) {
    const auto& doc = dataset_.at(id);
    RunPlan::Item item;
    item.doc_id = id;
    item.article = doc.text;
    item.messages = llm::assemble_prompt(v.blocks, doc.text, examples);
    item.cache_key = cache_key({item.messages, id, backend_id, plan.model, plan.temperature});
    plan.items.push_back(std::move(item));
  }
  return plan;
}

int Project::reserve_run(const RunPlan& plan) {
  if (plan.scope == RunScope::kBaseline) {
    if (baseline_) throw frozen("the baseline run already completed");
    for (const auto& r : runs_) {
      if (r.scope == RunScope::kBaseline && r.status == RunStatus::kRunning) {
        throw Error(ErrorKind::kPrecondition, "RUN_IN_PROGRESS", "baseline run in progress");
      }
    }
  }
  RunRecord r;
  r.id = next_run_id_++;
  r.version_id = plan.version_id;
  r.scope = plan.scope;
  r.backend_id = plan.backend_id;
  r.model = plan.model;
  r.temperature = plan.temperature;
  r.created = now_utc();
  runs_.push_back(std::move(r));
  return runs_.back().id;
}

void Project::commit_run(int run_id, RunRecord record) {
  auto it = std::find_if(runs_.begin(), runs_.end(), [&](const auto& r) { return r.id == run_id; });
  if (it == runs_.end()) throw not_found("RUN", run_id);
  record.id = run_id;
  record.created = it->created;
  if (record.scope == RunScope::kBaseline && record.status != RunStatus::kFailed) {
    if (baseline_) throw frozen("the baseline run already completed");
    freeze_baseline(record);
  }
  *it = std::move(record);
}

void Project::freeze_baseline(RunRecord& record) {
  try {
    BaselineState b;
    b.run_id = record.id;
    std::vector<double> raws;
    for (const auto& o : record.outputs) {
      if (o.ok()) raws.push_back(o.scores->naturalness_raw);
    }
    b.naturalness = metrics::NaturalnessScale::fit(raws);
    for (auto& o : record.outputs) {
      if (!o.ok()) continue;
      o.scores->naturalness = b.naturalness.score(o.scores->naturalness_raw);
      o.levels = metrics::categorize_all(*o.scores);
      b.ids.push_back(o.doc_id);
      b.rows.push_back(o.scores->values());
    }
    b.stats = analytics::BaselineStats::fit(b.rows);
    b.z = analytics::standardize(b.rows, b.stats);
    auto points = as_points(b.z);
    b.clusters = analytics::cluster_optics(points, settings_.optics);
    b.projection = analytics::fit_projection(points);
    if (b.clusters.cluster_count() > 0) b.validation = analytics::select_validation_set(b.clusters);
    baseline_ = std::move(b);
  } catch (const Error& e) {
    record.status = RunStatus::kFailed;
    record.error = std::string(e.what()) + (e.detail().empty() ? "" : ": " + e.detail());
  }
}

RunRecord Project::run_prompt(int version_id, RunScope scope, llm::Gateway& gateway,
                              const ProgressFn& progress) {
  auto plan = plan_run(version_id, scope, gateway.backend_id());
  int id = reserve_run(plan);
  RunRecord record;
  try {
    record = execute_run(plan, gateway, *cache_, progress);
  } catch (...) {
    RunRecord failed = run(id);
    failed.status = RunStatus::kFailed;
    failed.error = "execution aborted";
    commit_run(id, std::move(failed));
    throw;
  }
  commit_run(id, std::move(record));
  return run(id);
}

RunRecord execute_run(const RunPlan& plan, llm::Gateway& gateway, OutputCache& cache,
                      const ProgressFn& progress) {
  RunRecord rec;
  rec.version_id = plan.version_id;
  rec.scope = plan.scope;
  rec.backend_id = plan.backend_id;
  rec.model = plan.model;
  rec.temperature = plan.temperature;
  rec.outputs.resize(plan.items.size());

  metrics::MetricContext ctx;
  ctx.config = plan.metrics;
  std::atomic<std::size_t> next{0}, done{0}, calls{0};
  std::mutex progress_mu;

  auto work = [&](std::size_t i) {
    const auto& item = plan.items[i];
    auto& out = rec.outputs[i];
    out.doc_id = item.doc_id;
    if (auto hit = cache.get(item.cache_key)) {
      out.summary = *hit;
      out.cached = true;
    } else {
      try {
        llm::CompletionRequest req;
        req.model = plan.model;
        req.temperature = plan.temperature;
        req.messages = item.messages;
        req.tags[std::string(llm::tag::kTask)] = "summarize";
        req.tags[std::string(llm::tag::kPersona)] = plan.blocks.persona;
        req.tags[std::string(llm::tag::kConstraints)] = plan.blocks.constraints;
        req.tags[std::string(llm::tag::kArticle)] = item.article;
        ++calls;
        out.summary = cache.put(item.cache_key, gateway.complete(std::move(req)).text);
      } catch (const Error& e) {
        out.error = e.code() + ": " + e.what() + (e.detail().empty() ? "" : " (" + e.detail() + ")");
        return;
      }
    }
    try {
      auto scores = metrics::build_feature_vector({item.doc_id + "@v" + std::to_string(plan.version_id),
                                                   out.summary},
                                                  {item.doc_id, item.article}, ctx);
      if (plan.naturalness) {
        scores.naturalness = plan.naturalness->score(scores.naturalness_raw);
        out.levels = metrics::categorize_all(scores);
      }
      out.scores = std::move(scores);
    } catch (const Error& e) {
      out.error = e.code() + ": " + e.what() + (e.detail().empty() ? "" : " (" + e.detail() + ")");
    }
  };

  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.items.size(); i = next++) {
      try {
        work(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
      std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(d, plan.items.size());
      }
    }
  };
  std::size_t workers = std::min<std::size_t>(
      std::max<std::size_t>(1, plan.items.size()),
      static_cast<std::size_t>(std::max(1, gateway.options().max_in_flight)));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  rec.backend_calls = calls.load();
  std::size_t ok = rec.succeeded();
  if (ok == rec.outputs.size()) {
    rec.status = RunStatus::kCompleted;
  } else if (ok == 0) {
    rec.status = RunStatus::kFailed;
    rec.error = "every document failed";
  } else {
    rec.status = RunStatus::kPartial;
  }
  return rec;
}

}  // namespace promptscope::workspace
