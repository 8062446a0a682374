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
#ifndef PROMPTSCOPE_ANALYTICS_PROJECTION_HPP_
#define PROMPTSCOPE_ANALYTICS_PROJECTION_HPP_

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "promptscope/analytics/optics.hpp"

namespace promptscope::analytics {

using Point2 = std::array<double, 2>;

// Cosine similarity; 0 when either vector is zero.
double cosine_similarity(const Point& a, const Point& b);

// Kernel PCA on the cosine kernel, kept as a parametric model so later
// vectors land in the same plane as the training set.
struct ProjectionModel {
  std::vector<Point> training;
  std::vector<double> kernel_row_mean;
  double kernel_grand_mean = 0;
  std::array<double, 2> eigenvalues{};
  std::array<std::vector<double>, 2> eigenvectors;  // unit length
  std::vector<Point2> coordinates;

  // Throws Error(DIMENSION_MISMATCH) when z has the wrong length.
  Point2 project(const Point& z) const;

  nlohmann::json to_json() const;
  static ProjectionModel from_json(const nlohmann::json& j);
};

// Throws Error(INSUFFICIENT_DATA) for fewer than 3 vectors and
// Error(DEGENERATE_CORPUS) when fewer than 2 eigenvalues are positive.
ProjectionModel fit_projection(const std::vector<Point>& training);

}  // namespace promptscope::analytics

#endif  // PROMPTSCOPE_ANALYTICS_PROJECTION_HPP_
