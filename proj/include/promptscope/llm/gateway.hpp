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
#ifndef PROMPTSCOPE_LLM_GATEWAY_HPP_
#define PROMPTSCOPE_LLM_GATEWAY_HPP_

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "promptscope/llm/backend.hpp"

namespace promptscope::llm {

struct GatewayOptions {
  int max_in_flight = 4;
  double requests_per_second = 0.0;  // 0 disables the rate limit
  double burst = 4.0;
  std::string default_model = "gpt-3.5-turbo";
};

// Thread-safe front for a backend: bounds concurrent requests and paces them
// with a token bucket.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {});

  CompletionResult complete(CompletionRequest request);

  const std::string& backend_id() const { return backend_id_; }
  const GatewayOptions& options() const { return options_; }
  int peak_in_flight() const;

 private:
  void acquire();
  void release();
  void take_token();

  std::shared_ptr<Backend> backend_;
  std::string backend_id_;
  GatewayOptions options_;

  mutable std::mutex mu_;
  std::condition_variable slot_free_;
  int in_flight_ = 0;
  int peak_ = 0;

  std::mutex bucket_mu_;
  double tokens_;
  std::chrono::steady_clock::time_point refilled_;
};

}  // namespace promptscope::llm

#endif  // PROMPTSCOPE_LLM_GATEWAY_HPP_
