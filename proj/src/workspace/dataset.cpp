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
#include "promptscope/workspace/dataset.hpp"

#include <nlohmann/json.hpp>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/strings.hpp"

namespace promptscope::workspace {
namespace {

Error bad_line(std::size_t line, const std::string& why) {
  return Error(ErrorKind::kInvalidInput, "DATASET_INVALID",
               "malformed line " + std::to_string(line) + ": " + why);
}

}  // namespace

Dataset Dataset::parse(std::string_view jsonl) {
  Dataset d;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    auto line = trim(jsonl.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw bad_line(line_no, "not valid JSON");
    }
    if (!j.is_object()) throw bad_line(line_no, "expected an object");
    if (!j.contains("id") || !(j["id"].is_string() || j["id"].is_number_integer())) {
      throw bad_line(line_no, "missing id");
    }
    if (!j.contains("text") || !j["text"].is_string()) throw bad_line(line_no, "missing text");
    if (j.contains("title") && !j["title"].is_string() && !j["title"].is_null()) {
      throw bad_line(line_no, "title must be a string");
    }
    Document doc;
    doc.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    doc.text = j["text"].get<std::string>();
    if (j.contains("title") && j["title"].is_string()) doc.title = j["title"].get<std::string>();
    if (doc.id.empty()) throw bad_line(line_no, "empty id");
    if (d.index_.count(doc.id)) {
      throw Error(ErrorKind::kInvalidInput, "DUPLICATE_ID", "duplicate id '" + doc.id + "'",
                  "line " + std::to_string(line_no));
    }
    d.index_.emplace(doc.id, d.docs_.size());
    d.docs_.push_back(std::move(doc));
  }
  if (d.docs_.empty()) throw Error(ErrorKind::kInvalidInput, "EMPTY_DATASET", "empty dataset");
  return d;
}

Dataset Dataset::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const Document* Dataset::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &docs_[it->second];
}

const Document& Dataset::at(std::string_view id) const {
  if (const auto* d = find(id)) return *d;
  throw Error(ErrorKind::kNotFound, "UNKNOWN_DOCUMENT", "unknown document '" + std::string(id) + "'");
}

std::optional<std::size_t> Dataset::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Dataset::to_jsonl() const {
  std::string out;
  for (const auto& d : docs_) {
    nlohmann::json j = {{"id", d.id}, {"text", d.text}};
    if (!d.title.empty()) j["title"] = d.title;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace promptscope::workspace
