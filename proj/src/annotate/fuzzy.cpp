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
#include "promptscope/annotate/fuzzy.hpp"

#include <algorithm>
#include <numeric>

#include "promptscope/common/error.hpp"
#include "promptscope/common/strings.hpp"

namespace promptscope::annotate {
namespace {

std::u32string normalize(std::string_view s) {
  std::string folded;
  folded.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                 c == '\f' || c == '\v';
    if (space) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) folded.push_back(' ');
    pending_space = false;
    folded.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return utf8_decode(folded);
}

std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

double fuzzy_ratio(std::string_view a, std::string_view b) {
  auto na = normalize(a);
  auto nb = normalize(b);
  std::size_t longest = std::max(na.size(), nb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(na, nb)) /
                   static_cast<double>(longest);
}

SimilarityMatrix similar_entities(const std::vector<std::string>& mentions,
                                  double epsilon) {
  const std::size_t n = mentions.size();
  SimilarityMatrix s(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    s[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::uint8_t hit = fuzzy_ratio(mentions[i], mentions[j]) >= epsilon;
      s[i][j] = hit;
      s[j][i] = hit;
    }
  }
  return s;
}

EntityGroups disjoint_entity_sets(const SimilarityMatrix& similarity,
                                  const std::vector<std::string>& mentions) {
  const std::size_t n = mentions.size();
  if (similarity.size() != n) {
    throw Error(ErrorKind::kInvalidInput, "SHAPE_MISMATCH",
                "similarity matrix does not match entity count");
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    if (similarity[i].size() != n) {
      throw Error(ErrorKind::kInvalidInput, "SHAPE_MISMATCH",
                  "similarity matrix is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && similarity[i][j]) {
        auto ri = find_root(parent, i);
        auto rj = find_root(parent, j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  EntityGroups out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = find_root(parent, i);
    if (slot[r] == n) {
      slot[r] = out.members.size();
      out.members.emplace_back();
    }
    out.members[slot[r]].push_back(i);
  }
  for (const auto& group : out.members) {
    const std::string* best = &mentions[group.front()];
    std::size_t best_len = utf8_decode(*best).size();
    for (std::size_t idx : group) {
      const auto& m = mentions[idx];
      std::size_t len = utf8_decode(m).size();
      if (len > best_len || (len == best_len && m < *best)) {
        best = &m;
        best_len = len;
      }
    }
    out.representatives.push_back(*best);
  }
  return out;
}

}  // namespace promptscope::annotate
