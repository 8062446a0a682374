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
#ifndef PROMPTSCOPE_SERVICE_SERVER_HPP_
#define PROMPTSCOPE_SERVICE_SERVER_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "promptscope/service/api.hpp"

namespace httplib {
class Server;
}

namespace promptscope::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  std::filesystem::path static_dir;  // served at / when set
};

// HTTP front for an Api instance.
class Server {
 public:
  Server(Api& api, ServerOptions options);
  ~Server();

  // Binds and returns the port. Call listen() afterwards, or start() for a
  // background thread.
  int bind();
  void listen();
  void start();
  void stop();

 private:
  Api& api_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace promptscope::service

#endif  // PROMPTSCOPE_SERVICE_SERVER_HPP_
