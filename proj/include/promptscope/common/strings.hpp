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
#ifndef PROMPTSCOPE_COMMON_STRINGS_HPP_
#define PROMPTSCOPE_COMMON_STRINGS_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace promptscope {

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool contains_ci(std::string_view haystack, std::string_view needle);

// Decodes UTF-8 into code points; invalid bytes decode as U+FFFD.
std::u32string utf8_decode(std::string_view s);

}  // namespace promptscope

#endif  // PROMPTSCOPE_COMMON_STRINGS_HPP_
