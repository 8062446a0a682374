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
#include "promptscope/analytics/projection.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "promptscope/common/error.hpp"

namespace promptscope::analytics {

double cosine_similarity(const Point& a, const Point& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ProjectionModel fit_projection(const std::vector<Point>& training) {
  const std::size_t n = training.size();
  if (n < 3) {
    throw Error(ErrorKind::kPrecondition, "INSUFFICIENT_DATA", "insufficient data",
                "projection needs at least 3 vectors");
  }
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      k(i, j) = k(j, i) = cosine_similarity(training[i], training[j]);
    }
  }
  ProjectionModel m;
  m.training = training;
  Eigen::VectorXd row_mean = k.rowwise().mean();
  m.kernel_grand_mean = row_mean.mean();
  m.kernel_row_mean.assign(row_mean.data(), row_mean.data() + n);

  Eigen::MatrixXd kc = k;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      kc(i, j) = k(i, j) - row_mean(i) - row_mean(j) + m.kernel_grand_mean;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kc);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kInternal, "EIGEN_FAILED", "eigendecomposition failed");
  }
  const auto& values = solver.eigenvalues();  // ascending
  const double tol = 1e-10 * std::max(1.0, std::abs(values(n - 1)));
  for (int c = 0; c < 2; ++c) {
    auto col = static_cast<Eigen::Index>(n - 1 - static_cast<std::size_t>(c));
    if (!(values(col) > tol)) {
      throw Error(ErrorKind::kPrecondition, "DEGENERATE_CORPUS", "degenerate corpus",
                  "fewer than 2 positive kernel eigenvalues");
    }
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    m.eigenvalues[static_cast<std::size_t>(c)] = values(col);
    m.eigenvectors[static_cast<std::size_t>(c)].assign(v.data(), v.data() + n);
  }
  m.coordinates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      m.coordinates[i][c] = std::sqrt(m.eigenvalues[c]) * m.eigenvectors[c][i];
    }
  }
  return m;
}

Point2 ProjectionModel::project(const Point& z) const {
  if (!training.empty() && z.size() != training.front().size()) {
    throw Error(ErrorKind::kInvalidInput, "DIMENSION_MISMATCH", "dimension mismatch",
                "expected " + std::to_string(training.front().size()) + " components, got " +
                    std::to_string(z.size()));
  }
  const std::size_t n = training.size();
  std::vector<double> k(n);
  double mean = 0;
  for (std::size_t j = 0; j < n; ++j) {
    k[j] = cosine_similarity(z, training[j]);
    mean += k[j];
  }
  mean /= static_cast<double>(n);
  Point2 out{0, 0};
  for (std::size_t j = 0; j < n; ++j) {
    double kc = k[j] - mean - kernel_row_mean[j] + kernel_grand_mean;
    for (std::size_t c = 0; c < 2; ++c) out[c] += kc * eigenvectors[c][j];
  }
  for (std::size_t c = 0; c < 2; ++c) out[c] /= std::sqrt(eigenvalues[c]);
  return out;
}

nlohmann::json ProjectionModel::to_json() const {
  return {{"training", training},
          {"kernel_row_mean", kernel_row_mean},
          {"kernel_grand_mean", kernel_grand_mean},
          {"eigenvalues", eigenvalues},
          {"eigenvectors", eigenvectors},
          {"coordinates", coordinates}};
}

ProjectionModel ProjectionModel::from_json(const nlohmann::json& j) {
  ProjectionModel m;
  m.training = j.at("training").get<std::vector<Point>>();
  m.kernel_row_mean = j.at("kernel_row_mean").get<std::vector<double>>();
  m.kernel_grand_mean = j.at("kernel_grand_mean").get<double>();
  m.eigenvalues = j.at("eigenvalues").get<std::array<double, 2>>();
  m.eigenvectors = j.at("eigenvectors").get<std::array<std::vector<double>, 2>>();
  m.coordinates = j.at("coordinates").get<std::vector<Point2>>();
  return m;
}

}  // namespace promptscope::analytics
