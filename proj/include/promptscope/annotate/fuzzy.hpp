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
#ifndef PROMPTSCOPE_ANNOTATE_FUZZY_HPP_
#define PROMPTSCOPE_ANNOTATE_FUZZY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace promptscope::annotate {

// 1 - levenshtein / max length, over code points after ASCII case folding
// and whitespace collapsing. Two empty strings compare equal.
double fuzzy_ratio(std::string_view a, std::string_view b);

using SimilarityMatrix = std::vector<std::vector<std::uint8_t>>;

SimilarityMatrix similar_entities(const std::vector<std::string>& mentions,
                                  double epsilon);

struct EntityGroups {
  std::vector<std::vector<std::size_t>> members;  // indices into the input
  std::vector<std::string> representatives;
};

// Connected components of the similarity graph. Groups are ordered by their
// smallest member index.
EntityGroups disjoint_entity_sets(const SimilarityMatrix& similarity,
                                  const std::vector<std::string>& mentions);

}  // namespace promptscope::annotate

#endif  // PROMPTSCOPE_ANNOTATE_FUZZY_HPP_
