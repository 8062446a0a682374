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
#ifndef PROMPTSCOPE_COMMON_ERROR_HPP_
#define PROMPTSCOPE_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace promptscope {

// Broad failure classes. The service layer maps them onto HTTP status
// families; everything else only looks at the code string.
enum class ErrorKind {
  kInvalidInput,   // caller supplied something malformed
  kNotFound,       // unknown id, missing file
  kPrecondition,   // workflow step out of order
  kUnavailable,    // resource could not be loaded
  kBackend,        // LLM backend failure after retries
  kInternal,
};

// The single exception type thrown across module boundaries. `code` is a
// stable SCREAMING_CASE identifier; what() carries the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        std::string detail = {})
      : std::runtime_error(message),
        kind_(kind),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string detail_;
};

}  // namespace promptscope

#endif  // PROMPTSCOPE_COMMON_ERROR_HPP_
