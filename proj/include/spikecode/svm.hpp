// Copyright 2026 The spikecode Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spikecode/vectorizers.hpp"

namespace spikecode {

/// Optimizer for the per-class subproblems. Both minimize the same objective.
enum class SvmSolver { DualCoordinate, Pegasos };

std::string_view svm_solver_name(SvmSolver s);
SvmSolver parse_svm_solver(std::string_view name);

/// Training provenance stored alongside the weights.
struct TrainMeta {
  int epochs = 0;
  std::uint64_t seed = 0;
  SvmSolver solver = SvmSolver::DualCoordinate;
  VectorScheme vector_scheme = VectorScheme::V1;
  double mean_duration = 0.0;
  int n_time_bins = 0;

  friend bool operator==(const TrainMeta&, const TrainMeta&) = default;
};

/// One-against-all linear classifier: row c of `weights` scores class c.
struct LinearModel {
  int n_classes = 0;
  int dim = 0;
  std::vector<double> weights;  // n_classes x dim, row-major
  std::vector<double> biases;
  std::vector<std::string> class_labels;
  double regularization_lambda = 0.0;
  TrainMeta train_meta;

  std::span<const double> row(int c) const {
    return {weights.data() + static_cast<std::size_t>(c) * dim, static_cast<std::size_t>(dim)};
  }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct SvmOptions {
  double lambda = 1e-4;
  int epochs = 50;          // Pegasos passes
  double tolerance = 1e-3;  // dual: stop once every projected gradient is this small
  int max_passes = 100000;  // dual: hard cap on passes
  std::uint64_t seed = 42;
  SvmSolver solver = SvmSolver::DualCoordinate;
};

/// Regularized hinge objective after each pass (index 0 = before training),
/// summed over the per-class subproblems and evaluated at the iterate the
/// solver would return at that point: the best primal point so far for the
/// dual solver, the running average for Pegasos. Pegasos records epochs + 1
/// values; the dual solver one per pass until the slowest class converges.
struct SvmTrace {
  std::vector<double> objective;
};

// Per class c, minimizes
//   lambda/2 * (|w|^2 + b^2) + mean_i max(0, 1 - y_i (<w, x_i> + b))
// with y_i = +1 for class c and -1 otherwise. Both solvers visit samples in a
// seeded per-pass shuffle shared by all classes.
//
//  DualCoordinate: exact coordinate ascent on the box-constrained dual
//    (alpha_i in [0, 1/(lambda n)]), repeated until the KKT violation drops
//    below `tolerance`. Small training sets use a cached Gram matrix.
//  Pegasos: `epochs` passes of stochastic subgradient steps of size
//    1/(lambda t), projected onto the ball of radius 1/sqrt(lambda); returns
//    the iterate average.
//
// Class labels are sorted; ties in prediction resolve to the lowest index.
LinearModel train_ova_svm(std::span<const FeatureVector> xs, std::span<const std::string> labels,
                          const SvmOptions& opts = {}, SvmTrace* trace = nullptr);

std::vector<double> decision_values(const LinearModel& model, std::span<const double> x);
std::string predict(const LinearModel& model, std::span<const double> x);
inline std::string predict(const LinearModel& model, const FeatureVector& x) {
  return predict(model, x.values);
}

/// Mean one-vs-all hinge objective of `model` on the data (bias regularized).
double svm_objective(const LinearModel& model, std::span<const FeatureVector> xs,
                     std::span<const std::string> labels);

std::string linear_model_to_text(const LinearModel& model);
LinearModel linear_model_from_text(std::string_view text);
void save_linear_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_linear_model(const std::filesystem::path& path);

/// Sorted distinct labels; throws TrainingError when fewer than two.
std::vector<std::string> class_list(std::span<const std::string> labels);

}  // namespace spikecode
