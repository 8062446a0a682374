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
#include "promptscope/text/word_list.hpp"

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/strings.hpp"
#include "promptscope/text/embedded_resources.hpp"

namespace promptscope::text {
namespace {

template <typename Fn>
void for_each_entry(std::string_view contents, Fn&& fn) {
  std::size_t start = 0;
  while (start <= contents.size()) {
    auto nl = contents.find('\n', start);
    auto line = contents.substr(
        start, nl == std::string_view::npos ? std::string_view::npos
                                            : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto t = trim(line);
    if (!t.empty() && t.front() != '#') fn(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
}

std::string_view require_embedded(std::string_view name) {
  auto data = resources::embedded(name);
  if (data.empty()) {
    throw Error(ErrorKind::kUnavailable, "RESOURCE_MISSING",
                "no embedded resource " + std::string(name));
  }
  return data;
}

}  // namespace

WordList WordList::parse(std::string_view contents) {
  WordList list;
  for_each_entry(contents, [&](std::string_view line) { list.add(line); });
  return list;
}

WordList WordList::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

WordList WordList::embedded(std::string_view name) {
  return parse(require_embedded(name));
}

void WordList::merge(const WordList& other) {
  entries_.insert(other.entries_.begin(), other.entries_.end());
}

void WordList::add(std::string_view entry) {
  auto t = trim(entry);
  if (!t.empty()) entries_.insert(to_lower_ascii(t));
}

bool WordList::contains(std::string_view entry) const {
  return entries_.count(std::string(entry)) > 0;
}

Table parse_table(std::string_view contents) {
  Table table;
  for_each_entry(contents, [&](std::string_view line) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) return;
    table.emplace(std::string(trim(line.substr(0, tab))),
                  std::string(trim(line.substr(tab + 1))));
  });
  return table;
}

Table load_table(const std::filesystem::path& path) {
  return parse_table(read_file(path));
}

Table embedded_table(std::string_view name) {
  return parse_table(require_embedded(name));
}

}  // namespace promptscope::text
