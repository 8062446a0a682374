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
#ifndef PROMPTSCOPE_COMMON_FILES_HPP_
#define PROMPTSCOPE_COMMON_FILES_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace promptscope {

// Reads a whole file; throws Error(kNotFound) naming the path.
std::string read_file(const std::filesystem::path& path);

// Writes `content` to `<path>.tmp`, flushes it, then renames over `path`.
// Readers see either the previous file or the complete new one.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace promptscope

#endif  // PROMPTSCOPE_COMMON_FILES_HPP_
