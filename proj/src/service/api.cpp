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
#include "promptscope/service/api.hpp"

#include <algorithm>

#include "promptscope/analytics/stats.hpp"
#include "promptscope/llm/agents.hpp"
#include "promptscope/metrics/levels.hpp"
#include "promptscope/workspace/views.hpp"

namespace promptscope::service {
namespace {

using nlohmann::json;
using workspace::RunScope;

Error bad_request(const std::string& msg, const std::string& detail = {}) {
  return Error(ErrorKind::kInvalidInput, "INVALID_REQUEST", msg, detail);
}

Error route_not_found(const ApiRequest& r) {
  return Error(ErrorKind::kNotFound, "NO_ROUTE", "no such endpoint", r.method + " " + r.path);
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) out.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw bad_request(what + " must be an integer", "got '" + s + "'");
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw bad_request(what + " must be a number", "got '" + s + "'");
}

const json& require(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw bad_request(std::string("missing field '") + key + "'");
  }
  return body[key];
}

std::string require_string(const json& body, const char* key) {
  const auto& v = require(body, key);
  if (!v.is_string()) throw bad_request(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

int require_int(const json& body, const char* key) {
  const auto& v = require(body, key);
  if (!v.is_number_integer()) throw bad_request(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

bool truthy(const std::map<std::string, std::string>& q, const std::string& key, const json& body) {
  if (auto it = q.find(key); it != q.end()) return it->second == "true" || it->second == "1";
  return body.is_object() && body.value(key, false);
}

json run_summary(const workspace::RunRecord& r, const RunProgress* progress) {
  json j = {{"id", r.id},
            {"version_id", r.version_id},
            {"scope", workspace::scope_name(r.scope)},
            {"status", workspace::status_name(r.status)},
            {"backend_id", r.backend_id},
            {"created", r.created},
            {"documents", r.outputs.size()},
            {"succeeded", r.succeeded()},
            {"backend_calls", r.backend_calls},
            {"error", r.error}};
  if (progress) j["progress"] = {{"done", progress->done}, {"total", progress->total}};
  return j;
}

json version_json(const workspace::Project& p, const workspace::PromptVersion& v) {
  auto j = v.to_json();
  json runs = json::array();
  for (const auto& r : p.runs()) {
    if (r.version_id == v.id) runs.push_back(r.id);
  }
  j["runs"] = runs;
  return j;
}

llm::PromptBlocks blocks_from(const json& j) {
  if (!j.is_object()) throw bad_request("blocks must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!llm::is_block_name(k)) throw bad_request("unknown block '" + k + "'");
    if (!v.is_string()) throw bad_request("block '" + k + "' must be a string");
  }
  return llm::PromptBlocks::from_json(j);
}

}  // namespace

json ok_envelope(json payload) { return {{"status", "ok"}, {"payload", std::move(payload)}}; }

json error_envelope(const Error& e) {
  return {{"status", "error"},
          {"error", {{"code", e.code()}, {"message", e.what()}, {"detail", e.detail()}}}};
}

int http_status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidInput: return 400;
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kPrecondition: return 409;
    case ErrorKind::kUnavailable: return 503;
    case ErrorKind::kBackend: return 502;
    case ErrorKind::kInternal: return 500;
  }
  return 500;
}

Api::Api(workspace::Project project, std::shared_ptr<llm::Gateway> gateway)
    : project_(std::move(project)), gateway_(std::move(gateway)) {}

Api::~Api() {
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    return {200, ok_envelope(dispatch(request))};
  } catch (const Error& e) {
    return {http_status_for(e), error_envelope(e)};
  } catch (const json::exception& e) {
    Error err(ErrorKind::kInvalidInput, "INVALID_REQUEST", "malformed request body", e.what());
    return {400, error_envelope(err)};
  } catch (const std::exception& e) {
    Error err(ErrorKind::kInternal, "INTERNAL", "internal error", e.what());
    return {500, error_envelope(err)};
  }
}

json Api::snapshot() const {
  std::shared_lock lock(mu_);
  return project_.state_json();
}

void Api::persist() {
  if (!project_.dir().empty() && !project_.read_only()) project_.save();
}

void Api::wait_for_run(int run_id) {
  std::unique_lock lock(runs_mu_);
  runs_cv_.wait(lock, [&] {
    auto it = progress_.find(run_id);
    return it == progress_.end() || it->second.finished;
  });
}

void Api::wait_for_all_runs() {
  std::unique_lock lock(runs_mu_);
  runs_cv_.wait(lock, [&] {
    return std::all_of(progress_.begin(), progress_.end(),
                       [](const auto& kv) { return kv.second.finished; });
  });
}

json Api::start_run(int version_id, RunScope scope, bool wait) {
  workspace::RunPlan plan;
  int id = 0;
  {
    std::unique_lock lock(mu_);
    plan = project_.plan_run(version_id, scope, gateway_->backend_id());
    id = project_.reserve_run(plan);
    persist();
    std::lock_guard plock(runs_mu_);
    progress_[id] = {0, plan.items.size(), false};
  }
  auto work = [this, id, plan = std::move(plan)] {
    workspace::RunRecord record;
    try {
      record = workspace::execute_run(plan, *gateway_, project_.cache(),
                                      [this, id](std::size_t done, std::size_t total) {
                                        std::lock_guard plock(runs_mu_);
                                        progress_[id] = {done, total, false};
                                      });
    } catch (const std::exception& e) {
      record.version_id = plan.version_id;
      record.scope = plan.scope;
      record.backend_id = plan.backend_id;
      record.model = plan.model;
      record.temperature = plan.temperature;
      record.status = workspace::RunStatus::kFailed;
      record.error = e.what();
    }
    {
      std::unique_lock lock(mu_);
      try {
        project_.commit_run(id, std::move(record));
        persist();
      } catch (const std::exception&) {
        // The record stays as reserved; the run reads as failed after reload.
      }
    }
    {
      std::lock_guard plock(runs_mu_);
      progress_[id].finished = true;
    }
    runs_cv_.notify_all();
  };
  {
    std::lock_guard plock(runs_mu_);
    workers_.emplace_back(std::move(work));
  }
  if (wait) {
    wait_for_run(id);
    std::shared_lock lock(mu_);
    return run_summary(project_.run(id), nullptr);
  }
  return {{"run_id", id}, {"status", "running"}};
}

json Api::dispatch(const ApiRequest& req) {
  auto seg = segments(req.path);
  auto prefix = segments(kApiPrefix);
  if (seg.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), seg.begin())) {
    throw route_not_found(req);
  }
  seg.erase(seg.begin(), seg.begin() + static_cast<long>(prefix.size()));
  if (seg.empty()) throw route_not_found(req);
  const std::string& m = req.method;
  const std::string& head = seg[0];
  const json& body = req.body;
  auto q = [&](const std::string& k) -> std::optional<std::string> {
    auto it = req.query.find(k);
    if (it == req.query.end()) return std::nullopt;
    return it->second;
  };

  if (head == "health" && m == "GET") {
    return {{"backend", gateway_->backend_id()}};
  }

  if (head == "dataset" && m == "GET" && seg.size() == 1) {
    std::shared_lock lock(mu_);
    json docs = json::array();
    for (const auto& d : project_.dataset().documents()) {
      docs.push_back({{"id", d.id}, {"title", d.title}, {"characters", d.text.size()}});
    }
    return {{"count", project_.dataset().size()},
            {"documents", docs},
            {"has_baseline", project_.has_baseline()}};
  }

  if (head == "documents" && m == "GET" && seg.size() == 2) {
    std::shared_lock lock(mu_);
    const auto& d = project_.dataset().at(seg[1]);
    json j = {{"id", d.id}, {"title", d.title}, {"text", d.text}, {"baseline_summary", nullptr}};
    if (project_.has_baseline()) {
      if (const auto* o = project_.run(project_.baseline().run_id).find(d.id)) {
        j["baseline_summary"] = o->summary;
        if (o->scores) j["scores"] = workspace::scores_to_json(*o->scores);
        if (o->scores) j["levels"] = o->levels;
      }
    }
    return j;
  }

  if (head == "feature-descriptions" && m == "GET") {
    json out = json::array();
    for (auto f : metrics::kAllFeatures) {
      json levels = json::array();
      for (const auto& l : metrics::level_names(f)) {
        auto r = metrics::level_range(f, l);
        levels.push_back({{"name", l},
                          {"lower", r.lower},
                          {"upper", std::isinf(r.upper) ? json(nullptr) : json(r.upper)}});
      }
      out.push_back({{"feature", metrics::feature_name(f)}, {"levels", levels}});
    }
    return {{"features", out}, {"text", llm::feature_descriptions()}};
  }

  if (head == "blocks" && m == "GET") {
    json out = json::array();
    for (auto b : llm::kBlockNames) {
      out.push_back({{"name", b}, {"definition", llm::block_definition(b)}});
    }
    return out;
  }

  if (head == "baseline" && m == "POST") {
    int version_id = 0;
    {
      std::unique_lock lock(mu_);
      if (project_.versions().empty()) {
        version_id = project_.add_version(blocks_from(require(body, "blocks")), std::nullopt,
                                          body.value("note", "baseline"));
      } else {
        version_id = project_.versions().front().id;
        if (body.is_object() && body.contains("blocks")) {
          project_.update_version(version_id, blocks_from(body["blocks"]),
                                  body.value("note", project_.version(version_id).note));
        }
      }
      persist();
    }
    auto j = start_run(version_id, RunScope::kBaseline, truthy(req.query, "wait", body));
    j["version_id"] = version_id;
    return j;
  }

  if (head == "correlation" && m == "GET") {
    std::shared_lock lock(mu_);
    double tau = q("tau") ? to_double(*q("tau"), "tau") : project_.settings().correlation_threshold;
    auto j = workspace::to_json(analytics::pearson_matrix(project_.baseline().rows, tau));
    j["tau"] = tau;
    std::array<bool, metrics::kFeatureCount> included{};
    included.fill(true);
    if (project_.config()) included = project_.config()->included_mask();
    j["included"] = included;
    return j;
  }

  if (head == "clusters" && m == "GET") {
    std::shared_lock lock(mu_);
    const auto& b = project_.baseline();
    json points = json::array();
    std::size_t noise = 0;
    for (const auto& c : workspace::cluster_points(project_)) {
      points.push_back(workspace::to_json(c));
      noise += c.cluster == analytics::kNoise;
    }
    json validation = json::array();
    for (const auto& v : b.validation) {
      validation.push_back({{"doc_id", b.ids[v.index]}, {"weight", v.weight}, {"cluster", v.cluster}});
    }
    json j = {{"points", points},
              {"sizes", b.clusters.sizes},
              {"noise_count", noise},
              {"validation", validation},
              {"min_samples", b.clusters.min_samples},
              {"xi", b.clusters.xi},
              {"warning", b.clusters.warning}};
    if (auto radius = q("radius")) {
      double r = to_double(*radius, "radius");
      std::vector<analytics::Point2> xy;
      for (const auto& c : b.projection.coordinates) xy.push_back(c);
      auto layout = analytics::declutter_layout(xy, b.clusters.labels,
                                                std::vector<double>(xy.size(), r));
      json l = json::array();
      for (const auto& pt : layout) l.push_back({pt[0], pt[1]});
      j["layout"] = l;
    }
    return j;
  }

  if (head == "profiles" && m == "GET") {
    std::shared_lock lock(mu_);
    const auto& b = project_.baseline();
    json out = json::array();
    for (const auto& pr : analytics::cluster_profiles(b.clusters, b.rows)) {
      out.push_back(workspace::to_json(pr));
    }
    return out;
  }

  if (head == "distributions" && m == "GET") {
    std::shared_lock lock(mu_);
    json out = json::array();
    for (const auto& d : workspace::feature_distributions(project_)) out.push_back(workspace::to_json(d));
    return out;
  }

  if (head == "config") {
    if (m == "GET") {
      std::shared_lock lock(mu_);
      return project_.config() ? project_.config()->to_json() : json(nullptr);
    }
    if (m == "PUT" || m == "POST") {
      auto config = analytics::FeatureConfig::from_json(body);
      std::unique_lock lock(mu_);
      project_.set_config(config);
      persist();
      return project_.config()->to_json();
    }
  }

  if (head == "match") {
    std::shared_lock lock(mu_);
    const auto& b = project_.baseline();
    analytics::FeatureConfig config;
    if (m == "POST") {
      config = analytics::FeatureConfig::from_json(body);
    } else if (m == "GET" && project_.config()) {
      config = *project_.config();
    } else {
      throw Error(ErrorKind::kPrecondition, "NO_CONFIG", "no feature configuration");
    }
    auto match = analytics::match_cluster(config, b.clusters, b.rows);
    return {{"cluster", match.cluster}, {"fit", match.fit}, {"fits", match.fits}};
  }

  if (head == "recommendations" && m == "GET") {
    std::shared_lock lock(mu_);
    return workspace::to_json(workspace::recommend_examples(project_));
  }

  if (head == "starred" && m == "GET") {
    std::shared_lock lock(mu_);
    return project_.starred();
  }

  if (head == "star") {
    std::unique_lock lock(mu_);
    if (m == "POST" && seg.size() == 1) {
      project_.star(require_string(body, "doc_id"));
    } else if (m == "DELETE" && seg.size() == 2) {
      project_.unstar(seg[1]);
    } else {
      throw route_not_found(req);
    }
    persist();
    return project_.starred();
  }

  if (head == "versions") {
    if (seg.size() == 1 && m == "GET") {
      std::shared_lock lock(mu_);
      json out = json::array();
      for (const auto& v : project_.versions()) out.push_back(version_json(project_, v));
      return out;
    }
    if (seg.size() == 1 && m == "POST") {
      std::unique_lock lock(mu_);
      std::optional<int> parent;
      if (body.contains("parent") && !body["parent"].is_null()) parent = require_int(body, "parent");
      int id = project_.add_version(blocks_from(require(body, "blocks")), parent,
                                    body.value("note", ""));
      persist();
      return version_json(project_, project_.version(id));
    }
    if (seg.size() == 2) {
      int id = to_int(seg[1], "version id");
      if (m == "GET") {
        std::shared_lock lock(mu_);
        return version_json(project_, project_.version(id));
      }
      std::unique_lock lock(mu_);
      if (m == "PUT") {
        project_.update_version(id, blocks_from(require(body, "blocks")),
                                body.value("note", project_.version(id).note));
        persist();
        return version_json(project_, project_.version(id));
      }
      if (m == "DELETE") {
        project_.delete_version(id);
        persist();
        return {{"deleted", id}};
      }
    }
  }

  if (head == "suggestions" && m == "POST") {
    auto block = require_string(body, "block");
    auto question = body.value("question", "");
    return {{"block", block}, {"suggestion", llm::suggest_block(*gateway_, block, question)}};
  }

  if (head == "recommend-features" && m == "POST") {
    auto goal = body.is_object() ? body.value("goal", "") : std::string();
    auto rec = llm::recommend_features(*gateway_, goal);
    return {{"config", rec.config.to_json()}, {"explanation", rec.explanation}};
  }

  if (head == "runs") {
    if (seg.size() == 1 && m == "POST") {
      auto scope = workspace::parse_scope(body.value("scope", "validation"));
      if (scope == RunScope::kBaseline) throw bad_request("use the baseline endpoint for the baseline run");
      return start_run(require_int(body, "version_id"), scope, truthy(req.query, "wait", body));
    }
    if (seg.size() == 1 && m == "GET") {
      std::shared_lock lock(mu_);
      std::lock_guard plock(runs_mu_);
      json out = json::array();
      for (const auto& r : project_.runs()) {
        auto it = progress_.find(r.id);
        out.push_back(run_summary(r, it == progress_.end() ? nullptr : &it->second));
      }
      return out;
    }
    if (seg.size() == 2 && m == "GET") {
      int id = to_int(seg[1], "run id");
      std::shared_lock lock(mu_);
      std::lock_guard plock(runs_mu_);
      const auto& r = project_.run(id);
      auto it = progress_.find(id);
      auto j = run_summary(r, it == progress_.end() ? nullptr : &it->second);
      j["outputs"] = r.to_json()["outputs"];
      return j;
    }
  }

  if (head == "dotplot" && m == "GET") {
    auto v = q("version");
    if (!v) throw bad_request("missing query parameter 'version'");
    std::shared_lock lock(mu_);
    return workspace::to_json(workspace::dot_plot(project_, to_int(*v, "version")));
  }

  if (head == "compare" && m == "GET") {
    auto o = q("old"), n = q("new");
    if (!o || !n) throw bad_request("query parameters 'old' and 'new' are required");
    std::shared_lock lock(mu_);
    return workspace::to_json(
        workspace::compare_versions(project_, to_int(*o, "old"), to_int(*n, "new")));
  }

  if (head == "export" && m == "GET") {
    auto what = q("what").value_or("json");
    std::shared_lock lock(mu_);
    if (what == "csv") return {{"format", "csv"}, {"content", workspace::export_csv(project_)}};
    if (what == "json") return project_.state_json();
    throw bad_request("unknown export format '" + what + "'", "expected csv or json");
  }

  throw route_not_found(req);
}

}  // namespace promptscope::service
