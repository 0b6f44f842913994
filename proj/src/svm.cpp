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

#include "spikecode/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"
#include "model_text.hpp"

namespace spikecode {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Binary objective for one class with weights `w` and bias `b`.
double binary_objective(std::span<const double> w, double b, double lambda,
                        std::span<const FeatureVector> xs, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    loss += std::max(0.0, 1.0 - y[i] * (dot(w, xs[i].values) + b));
  }
  return 0.5 * lambda * (dot(w, w) + b * b) + loss / static_cast<double>(xs.size());
}

// Above this many samples the dual solver works on w directly instead of
// caching the n x n Gram matrix.
constexpr std::size_t kGramLimit = 3000;

// Seeded pass orders. Every class replays the same stream, so the
// per-class subproblems see identical visiting orders.
class PassOrder {
 public:
  PassOrder(std::size_t n, std::uint64_t seed) : rng_(seed), idx_(n) {
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
  }
  const std::vector<std::size_t>& next() {
    std::shuffle(idx_.begin(), idx_.end(), rng_);
    return idx_;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::size_t> idx_;
};

// Augmented Gram matrix K_ij = <x_i, x_j> + 1, row-major.
std::vector<double> gram_matrix(std::span<const FeatureVector> xs) {
  const std::size_t n = xs.size();
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      k[i * n + j] = k[j * n + i] = dot(xs[i].values, xs[j].values) + 1.0;
    }
  }
  return k;
}

// Dual coordinate ascent on
//   max sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij,  0 <= a_i <= 1/(lambda n),
// which is the dual of the bias-augmented primal. Passes continue until every
// projected gradient is within `tol` or `max_passes` is reached. The primal
// objective is not monotone along the dual path, so the best primal point seen
// at a pass boundary is kept and returned; `objective` receives its value
// after every pass (index 0 = before training).
void solve_dual(std::span<const FeatureVector> xs, std::span<const int> y, double lambda,
                const std::vector<double>* gram, const SvmOptions& opts, std::vector<double>& w,
                double& b, std::vector<double>& objective) {
  const std::size_t n = xs.size();
  const std::size_t dim = w.size();
  const double upper = 1.0 / (lambda * static_cast<double>(n));
  std::vector<double> alpha(n, 0.0), qii(n), f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    qii[i] = gram != nullptr ? (*gram)[i * n + i] : dot(xs[i].values, xs[i].values) + 1.0;
  }
  std::fill(w.begin(), w.end(), 0.0);
  b = 0.0;

  // Decision values f_i and the regularizer |w|^2 + b^2 for the current alpha.
  const auto refresh = [&]() {
    double reg = 0.0;
    if (gram != nullptr) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = gram->data() + i * n;
        for (std::size_t j = 0; j < n; ++j) s += alpha[j] * y[j] * row[j];
        f[i] = s;
      }
      for (std::size_t i = 0; i < n; ++i) reg += alpha[i] * y[i] * f[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) f[i] = dot(w, xs[i].values) + b;
      reg = dot(w, w) + b * b;
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += std::max(0.0, 1.0 - y[i] * f[i]);
    return 0.5 * lambda * reg + loss / static_cast<double>(n);
  };
  const auto projected = [&](std::size_t i, double g) {
    if (alpha[i] <= 0.0) return std::min(g, 0.0);
    if (alpha[i] >= upper) return std::max(g, 0.0);
    return g;
  };

  double best = refresh();
  std::vector<double> best_alpha = alpha;
  objective.assign(1, best);
  PassOrder order(n, opts.seed);

  for (int pass = 0; pass < opts.max_passes; ++pass) {
    for (std::size_t i : order.next()) {
      const double fi = gram != nullptr ? f[i] : dot(w, xs[i].values) + b;
      const double g = y[i] * fi - 1.0;
      if (projected(i, g) == 0.0) continue;
      const double next = std::clamp(alpha[i] - g / qii[i], 0.0, upper);
      const double d = (next - alpha[i]) * y[i];
      if (d == 0.0) continue;
      alpha[i] = next;
      if (gram != nullptr) {
        const double* col = gram->data() + i * n;  // symmetric: row i == column i
        for (std::size_t j = 0; j < n; ++j) f[j] += d * col[j];
      } else {
        const auto& x = xs[i].values;
        for (std::size_t k = 0; k < dim; ++k) w[k] += d * x[k];
        b += d;
      }
    }
    const double obj = refresh();
    if (obj < best) {
      best = obj;
      best_alpha = alpha;
    }
    objective.push_back(best);
    double violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      violation = std::max(violation, std::abs(projected(i, y[i] * f[i] - 1.0)));
    }
    if (violation <= opts.tolerance) break;
  }

  std::fill(w.begin(), w.end(), 0.0);
  b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_alpha[i] == 0.0) continue;
    const double c = best_alpha[i] * y[i];
    const auto& x = xs[i].values;
    for (std::size_t k = 0; k < dim; ++k) w[k] += c * x[k];
    b += c;
  }
}

void solve_pegasos(std::span<const FeatureVector> xs, std::span<const int> y, double lambda,
                   const SvmOptions& opts, std::vector<double>& avg_w, double& avg_b,
                   std::vector<double>& objective) {
  const std::size_t dim = avg_w.size();
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> w(dim, 0.0);
  std::fill(avg_w.begin(), avg_w.end(), 0.0);
  double b = 0.0;
  avg_b = 0.0;
  std::uint64_t t = 0;
  objective.assign(1, binary_objective(avg_w, avg_b, lambda, xs, y));
  PassOrder order(xs.size(), opts.seed);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    for (std::size_t i : order.next()) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto& x = xs[i].values;
      const double margin = y[i] * (dot(w, x) + b);
      const double shrink = 1.0 - eta * lambda;
      for (double& wk : w) wk *= shrink;
      b *= shrink;
      if (margin < 1.0) {
        const double step = eta * y[i];
        for (std::size_t k = 0; k < dim; ++k) w[k] += step * x[k];
        b += step;
      }
      const double norm = std::sqrt(dot(w, w) + b * b);
      if (norm > radius) {
        const double s = radius / norm;
        for (double& wk : w) wk *= s;
        b *= s;
      }
      const double a = 1.0 / static_cast<double>(t);
      for (std::size_t k = 0; k < dim; ++k) avg_w[k] += a * (w[k] - avg_w[k]);
      avg_b += a * (b - avg_b);
    }
    objective.push_back(binary_objective(avg_w, avg_b, lambda, xs, y));
  }
}

}  // namespace

std::string_view svm_solver_name(SvmSolver s) {
  return s == SvmSolver::DualCoordinate ? "dual_cd" : "pegasos";
}

SvmSolver parse_svm_solver(std::string_view name) {
  if (name == "dual_cd" || name == "dual-cd") return SvmSolver::DualCoordinate;
  if (name == "pegasos") return SvmSolver::Pegasos;
  throw ConfigError("unknown SVM solver '" + std::string(name) + "' (expected dual_cd or pegasos)");
}

std::vector<std::string> class_list(std::span<const std::string> labels) {
  std::vector<std::string> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw TrainingError("training requires at least two distinct labels");
  return classes;
}

LinearModel train_ova_svm(std::span<const FeatureVector> xs, std::span<const std::string> labels,
                          const SvmOptions& opts, SvmTrace* trace) {
  if (xs.size() != labels.size()) throw ShapeError("train_ova_svm: label count mismatch");
  if (xs.empty()) throw TrainingError("train_ova_svm: empty training set");
  if (!(opts.lambda > 0)) throw ConfigError("train_ova_svm: lambda must be > 0");
  if (opts.epochs < 1) throw ConfigError("train_ova_svm: epochs must be >= 1");
  if (opts.max_passes < 1) throw ConfigError("train_ova_svm: max_passes must be >= 1");
  if (!(opts.tolerance > 0)) throw ConfigError("train_ova_svm: tolerance must be > 0");
  const std::size_t dim = xs.front().length();
  for (const auto& x : xs) {
    if (x.length() != dim) throw ShapeError("train_ova_svm: feature vectors differ in length");
  }

  LinearModel model;
  model.class_labels = class_list(labels);
  model.n_classes = static_cast<int>(model.class_labels.size());
  model.dim = static_cast<int>(dim);
  model.weights.assign(static_cast<std::size_t>(model.n_classes) * dim, 0.0);
  model.biases.assign(static_cast<std::size_t>(model.n_classes), 0.0);
  model.regularization_lambda = opts.lambda;
  model.train_meta.epochs = opts.epochs;
  model.train_meta.seed = opts.seed;
  model.train_meta.solver = opts.solver;
  model.train_meta.vector_scheme = xs.front().scheme;

  const std::size_t n = xs.size();
  std::vector<int> class_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    class_of[i] = static_cast<int>(
        std::lower_bound(model.class_labels.begin(), model.class_labels.end(), labels[i]) -
        model.class_labels.begin());
  }

  const bool use_gram = opts.solver == SvmSolver::DualCoordinate && n <= kGramLimit;
  const std::vector<double> gram = use_gram ? gram_matrix(xs) : std::vector<double>{};

  std::vector<int> y(n);
  std::vector<double> w(dim), objective;
  if (trace != nullptr) trace->objective.clear();
  for (int c = 0; c < model.n_classes; ++c) {
    for (std::size_t i = 0; i < n; ++i) y[i] = class_of[i] == c ? 1 : -1;
    double b = 0.0;
    if (opts.solver == SvmSolver::DualCoordinate) {
      solve_dual(xs, y, opts.lambda, use_gram ? &gram : nullptr, opts, w, b, objective);
    } else {
      solve_pegasos(xs, y, opts.lambda, opts, w, b, objective);
    }
    if (trace != nullptr) {
      // Classes that stop early hold their final value in later slots.
      auto& total = trace->objective;
      const std::size_t len = std::max(total.size(), objective.size());
      std::vector<double> sum(len, 0.0);
      for (std::size_t k = 0; k < len; ++k) {
        const double prev = total.empty() ? 0.0 : total[std::min(k, total.size() - 1)];
        sum[k] = prev + objective[std::min(k, objective.size() - 1)];
      }
      total = std::move(sum);
    }
    std::copy(w.begin(), w.end(), model.weights.begin() + static_cast<std::ptrdiff_t>(c * dim));
    model.biases[static_cast<std::size_t>(c)] = b;
  }
  return model;
}

std::vector<double> decision_values(const LinearModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.dim)) {
    throw ShapeError("predict: feature length " + std::to_string(x.size()) + " != model dim " +
                     std::to_string(model.dim));
  }
  std::vector<double> out(static_cast<std::size_t>(model.n_classes));
  for (int c = 0; c < model.n_classes; ++c) {
    out[static_cast<std::size_t>(c)] = dot(model.row(c), x) + model.biases[static_cast<std::size_t>(c)];
  }
  return out;
}

std::string predict(const LinearModel& model, std::span<const double> x) {
  const auto scores = decision_values(model, x);
  // max_element returns the first maximum, i.e. the lowest index on ties.
  const auto best = std::max_element(scores.begin(), scores.end()) - scores.begin();
  return model.class_labels[static_cast<std::size_t>(best)];
}

double svm_objective(const LinearModel& model, std::span<const FeatureVector> xs,
                     std::span<const std::string> labels) {
  double total = 0.0;
  std::vector<int> y(xs.size());
  for (int c = 0; c < model.n_classes; ++c) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      y[i] = labels[i] == model.class_labels[static_cast<std::size_t>(c)] ? 1 : -1;
    }
    total += binary_objective(model.row(c), model.biases[static_cast<std::size_t>(c)],
                              model.regularization_lambda, xs, y);
  }
  return total;
}

std::string linear_model_to_text(const LinearModel& model) {
  model_text::Writer w("linear-model");
  w.field("n_classes", model.n_classes);
  w.field("dim", model.dim);
  w.field("lambda", model.regularization_lambda);
  w.field("epochs", model.train_meta.epochs);
  w.field("seed", model.train_meta.seed);
  w.field("solver", svm_solver_name(model.train_meta.solver));
  w.field("vector_scheme", vector_scheme_name(model.train_meta.vector_scheme));
  w.field("mean_duration", model.train_meta.mean_duration);
  w.field("n_time_bins", model.train_meta.n_time_bins);
  for (const auto& label : model.class_labels) w.field("label", label);
  w.row("biases", model.biases);
  for (int c = 0; c < model.n_classes; ++c) w.row("w", model.row(c));
  return w.str();
}

LinearModel linear_model_from_text(std::string_view text) {
  model_text::Reader r(text, "linear-model");
  LinearModel m;
  m.n_classes = static_cast<int>(r.integer("n_classes"));
  m.dim = static_cast<int>(r.integer("dim"));
  if (m.n_classes < 1 || m.dim < 0) throw ParseError("invalid model shape");
  m.regularization_lambda = r.real("lambda");
  m.train_meta.epochs = static_cast<int>(r.integer("epochs"));
  m.train_meta.seed = static_cast<std::uint64_t>(r.integer("seed"));
  m.train_meta.solver = parse_svm_solver(r.text("solver"));
  m.train_meta.vector_scheme = parse_vector_scheme(r.text("vector_scheme"));
  m.train_meta.mean_duration = r.real("mean_duration");
  m.train_meta.n_time_bins = static_cast<int>(r.integer("n_time_bins"));
  for (int c = 0; c < m.n_classes; ++c) m.class_labels.push_back(r.text("label"));
  m.biases = r.row("biases", static_cast<std::size_t>(m.n_classes));
  m.weights.reserve(static_cast<std::size_t>(m.n_classes) * m.dim);
  for (int c = 0; c < m.n_classes; ++c) {
    const auto w = r.row("w", static_cast<std::size_t>(m.dim));
    m.weights.insert(m.weights.end(), w.begin(), w.end());
  }
  r.finish();
  return m;
}

void save_linear_model(const LinearModel& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, linear_model_to_text(model));
}

LinearModel load_linear_model(const std::filesystem::path& path) {
  return linear_model_from_text(io::read_file(path));
}

}  // namespace spikecode
