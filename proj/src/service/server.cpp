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
#include "promptscope/service/server.hpp"

#include <httplib.h>

namespace promptscope::service {

Server::Server(Api& api, ServerOptions options)
    : api_(api), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  auto cors = [origin = options_.cors_origin](httplib::Response& res) {
    if (origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  auto handler = [this, cors](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    ApiResponse out;
    if (!req.body.empty()) {
      try {
        r.body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception& e) {
        Error err(ErrorKind::kInvalidInput, "INVALID_JSON", "request body is not valid JSON",
                  e.what());
        out = {400, error_envelope(err)};
      }
    }
    if (out.envelope.is_null()) out = api_.handle(r);
    cors(res);
    res.status = out.http_status;
    res.set_content(out.envelope.dump(), "application/json");
  };
  const std::string pattern = std::string(kApiPrefix) + "/.*";
  http_->Get(pattern, handler);
  http_->Post(pattern, handler);
  http_->Put(pattern, handler);
  http_->Delete(pattern, handler);
  http_->Options(pattern, [cors](const httplib::Request&, httplib::Response& res) {
    cors(res);
    res.status = 204;
  });
  if (!options_.static_dir.empty()) http_->set_mount_point("/", options_.static_dir.string());
}

Server::~Server() { stop(); }

int Server::bind() {
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else {
    port_ = http_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorKind::kUnavailable, "BIND_FAILED", "cannot bind server",
                options_.host + ":" + std::to_string(options_.port));
  }
  return port_;
}

void Server::listen() { http_->listen_after_bind(); }

void Server::start() {
  thread_ = std::thread([this] { listen(); });
  http_->wait_until_ready();
}

void Server::stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace promptscope::service
