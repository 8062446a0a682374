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
#ifndef PROMPTSCOPE_TEXT_STEMMER_HPP_
#define PROMPTSCOPE_TEXT_STEMMER_HPP_

#include <string>
#include <string_view>

namespace promptscope::text {

// One pass of the Porter (1980) suffix-stripping algorithm on a lowercase
// word. Not idempotent on its own ("agreed" -> "agre" -> "agr").
std::string porter_step(std::string_view word);

// Porter stemming iterated to a fixed point, so stem(stem(w)) == stem(w).
// If the passes cycle, the lexicographically smallest member is returned.
std::string stem(std::string_view word);

}  // namespace promptscope::text

#endif  // PROMPTSCOPE_TEXT_STEMMER_HPP_
