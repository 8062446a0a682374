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
#ifndef PROMPTSCOPE_SERVICE_API_HPP_
#define PROMPTSCOPE_SERVICE_API_HPP_

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/common/error.hpp"
#include "promptscope/llm/gateway.hpp"
#include "promptscope/workspace/project.hpp"

namespace promptscope::service {

inline constexpr std::string_view kApiPrefix = "/api/v1";

struct ApiRequest {
  std::string method;  // GET, POST, PUT, DELETE
  std::string path;    // full path including the prefix
  std::map<std::string, std::string> query;
  nlohmann::json body;  // null when absent
};

struct ApiResponse {
  int http_status = 200;
  nlohmann::json envelope;  // {"status":"ok","payload":...} or {"status":"error","error":{...}}
};

nlohmann::json ok_envelope(nlohmann::json payload);
nlohmann::json error_envelope(const Error& e);
int http_status_for(const Error& e);

struct RunProgress {
  std::size_t done = 0;
  std::size_t total = 0;
  bool finished = false;
};

// Workflow façade over one project. Reads run concurrently under a shared
// lock; mutations take it exclusively, so no caller sees a half-applied
// change. Runs execute on background threads.
class Api {
 public:
  Api(workspace::Project project, std::shared_ptr<llm::Gateway> gateway);
  ~Api();
  Api(const Api&) = delete;
  Api& operator=(const Api&) = delete;

  ApiResponse handle(const ApiRequest& request);

  // Blocks until the run leaves the running state.
  void wait_for_run(int run_id);
  void wait_for_all_runs();

  // Snapshot of the project state, taken under the shared lock.
  nlohmann::json snapshot() const;

 private:
  nlohmann::json dispatch(const ApiRequest& request);
  nlohmann::json start_run(int version_id, workspace::RunScope scope, bool wait);
  void persist();

  workspace::Project project_;
  std::shared_ptr<llm::Gateway> gateway_;
  mutable std::shared_mutex mu_;

  std::mutex runs_mu_;
  std::condition_variable runs_cv_;
  std::map<int, RunProgress> progress_;
  std::vector<std::thread> workers_;
};

}  // namespace promptscope::service

#endif  // PROMPTSCOPE_SERVICE_API_HPP_
