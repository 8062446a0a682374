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
#ifndef PROMPTSCOPE_TEXT_EMBEDDED_RESOURCES_HPP_
#define PROMPTSCOPE_TEXT_EMBEDDED_RESOURCES_HPP_

#include <string_view>

namespace promptscope::resources {

// Contents of a shipped data/ file compiled into the binary, or an empty
// view for an unknown name.
std::string_view embedded(std::string_view name);

}  // namespace promptscope::resources

#endif  // PROMPTSCOPE_TEXT_EMBEDDED_RESOURCES_HPP_
