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
#include "promptscope/llm/gateway.hpp"

#include <algorithm>
#include <thread>

#include "promptscope/common/error.hpp"

namespace promptscope::llm {

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      tokens_(options_.burst),
      refilled_(std::chrono::steady_clock::now()) {
  if (!backend_) {
    throw Error(ErrorKind::kInvalidInput, "INVALID_REQUEST", "gateway needs a backend");
  }
  options_.max_in_flight = std::max(1, options_.max_in_flight);
  backend_id_ = backend_->id();
}

void Gateway::acquire() {
  std::unique_lock lock(mu_);
  slot_free_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
  ++in_flight_;
  peak_ = std::max(peak_, in_flight_);
}

void Gateway::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  slot_free_.notify_one();
}

void Gateway::take_token() {
  if (options_.requests_per_second <= 0.0) return;
  for (;;) {
    std::chrono::duration<double> wait{0};
    {
      std::lock_guard lock(bucket_mu_);
      auto now = std::chrono::steady_clock::now();
      std::chrono::duration<double> elapsed = now - refilled_;
      tokens_ = std::min(options_.burst, tokens_ + elapsed.count() * options_.requests_per_second);
      refilled_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / options_.requests_per_second);
    }
    std::this_thread::sleep_for(wait);
  }
}

int Gateway::peak_in_flight() const {
  std::lock_guard lock(mu_);
  return peak_;
}

CompletionResult Gateway::complete(CompletionRequest request) {
  if (request.model.empty()) request.model = options_.default_model;
  request.validate();
  take_token();
  acquire();
  struct Release {
    Gateway* g;
    ~Release() { g->release(); }
  } guard{this};
  auto start = std::chrono::steady_clock::now();
  auto result = backend_->complete(request);
  if (result.latency.count() == 0) {
    result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
  }
  return result;
}

}  // namespace promptscope::llm
