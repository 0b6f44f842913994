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

#include "spikecode/tempotron.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "model_text.hpp"
#include "spikecode/error.hpp"
#include "spikecode/io.hpp"
#include "spikecode/svm.hpp"

namespace spikecode {

double kernel_peak_time(double tau_m, double tau_s) {
  if (!(tau_m > tau_s && tau_s > 0)) throw ConfigError("tempotron: require tau_m > tau_s > 0");
  return tau_m * tau_s * std::log(tau_m / tau_s) / (tau_m - tau_s);
}

double kernel_norm(double tau_m, double tau_s) {
  const double tp = kernel_peak_time(tau_m, tau_s);
  return 1.0 / (std::exp(-tp / tau_m) - std::exp(-tp / tau_s));
}

double TempotronModel::t_peak() const { return kernel_peak_time(tau_m, tau_s); }

TempotronModel make_tempotron(int n_afferents, std::vector<std::string> class_labels,
                              const TempotronParams& params, std::uint64_t seed) {
  if (n_afferents < 1) throw ConfigError("tempotron: need at least one afferent");
  if (class_labels.size() < 2) throw TrainingError("tempotron: need at least two classes");
  if (!(params.learn_rate > 0)) throw ConfigError("tempotron: learn_rate must be > 0");
  if (!(params.grid_step > 0)) throw ConfigError("tempotron: grid_step must be > 0");
  if (!(params.init_max_weight >= 0)) throw ConfigError("tempotron: init_max_weight must be >= 0");
  TempotronModel m;
  m.n_classes = static_cast<int>(class_labels.size());
  m.n_afferents = n_afferents;
  m.tau_m = params.tau_m;
  m.tau_s = params.tau_s;
  m.kernel_norm = kernel_norm(params.tau_m, params.tau_s);
  m.learn_rate = params.learn_rate;
  m.grid_step = params.grid_step;
  m.class_labels = std::move(class_labels);
  m.seed = seed;
  m.weights.resize(static_cast<std::size_t>(m.n_classes) * n_afferents);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, params.init_max_weight);
  for (double& w : m.weights) w = dist(rng);
  return m;
}

double membrane_potential(const SpikePattern& pattern, std::span<const double> weights,
                          const TempotronModel& model, double t) {
  if (weights.size() != static_cast<std::size_t>(pattern.n_neurons())) {
    throw ShapeError("membrane_potential: weight count != pattern afferents");
  }
  double v = 0.0;
  for (int n = 0; n < pattern.n_neurons(); ++n) {
    double sum = 0.0;
    for (double s : pattern.times(n)) {
      if (s > t) break;
      sum += psp_kernel(t - s, model.tau_m, model.tau_s, model.kernel_norm);
    }
    v += weights[static_cast<std::size_t>(n)] * sum;
  }
  return model.v_rest + v;
}

PreparedPattern::PreparedPattern(const SpikePattern& pattern, const TempotronModel& model)
    : n_afferents_(pattern.n_neurons()),
      tau_m_(model.tau_m),
      tau_s_(model.tau_s),
      v0_(model.kernel_norm) {
  if (pattern.n_neurons() != model.n_afferents) {
    throw ShapeError("tempotron: pattern has " + std::to_string(pattern.n_neurons()) +
                     " afferents, model expects " + std::to_string(model.n_afferents));
  }
  const double tp = model.t_peak();
  const auto n_grid = static_cast<std::size_t>(std::floor(pattern.duration / model.grid_step + 1e-9)) + 1;
  steps_.reserve(2 * pattern.total_spikes() + n_grid);
  for (std::size_t k = 0; k < n_grid; ++k) {
    steps_.push_back({-1, static_cast<double>(k) * model.grid_step, 0, 0});
  }
  for (int n = 0; n < pattern.n_neurons(); ++n) {
    for (double s : pattern.times(n)) {
      steps_.push_back({n, s, 0, 0});
      steps_.push_back({-1, s + tp, 0, 0});
    }
  }
  // Spikes before evaluation points at equal times; K(0) = 0 so either order
  // gives the same potential.
  std::sort(steps_.begin(), steps_.end(), [](const Step& a, const Step& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.afferent > b.afferent;
  });
  double prev = 0.0;
  for (auto& st : steps_) {
    const double dt = st.time - prev;
    st.decay_m = std::exp(-dt / tau_m_);
    st.decay_s = std::exp(-dt / tau_s_);
    prev = st.time;
  }
}

PeakPotential PreparedPattern::peak(std::span<const double> weights) const {
  double a = 0.0, b = 0.0;
  PeakPotential best{0.0, -std::numeric_limits<double>::infinity()};
  for (const auto& st : steps_) {
    a *= st.decay_m;
    b *= st.decay_s;
    if (st.afferent >= 0) {
      const double w = weights[static_cast<std::size_t>(st.afferent)];
      a += w;
      b += w;
    } else {
      const double v = v0_ * (a - b);
      if (v > best.value) best = {st.time, v};
    }
  }
  return best;
}

std::vector<double> PreparedPattern::kernel_sums(double t) const {
  std::vector<double> sums(static_cast<std::size_t>(n_afferents_), 0.0);
  for (const auto& st : steps_) {
    if (st.time > t) break;
    if (st.afferent >= 0) {
      sums[static_cast<std::size_t>(st.afferent)] += psp_kernel(t - st.time, tau_m_, tau_s_, v0_);
    }
  }
  return sums;
}

PeakPotential peak_potential(const SpikePattern& pattern, std::span<const double> weights,
                             const TempotronModel& model) {
  if (weights.size() != static_cast<std::size_t>(pattern.n_neurons())) {
    throw ShapeError("peak_potential: weight count != pattern afferents");
  }
  return PreparedPattern(pattern, model).peak(weights);
}

TempotronModel train_tempotron(std::span<const SpikePattern> patterns,
                               std::span<const std::string> labels, TempotronModel model,
                               int epochs, std::uint64_t seed, TempotronTrace* trace) {
  if (patterns.size() != labels.size()) throw ShapeError("train_tempotron: label count mismatch");
  if (patterns.empty()) throw TrainingError("train_tempotron: empty training set");
  if (epochs < 0) throw ConfigError("train_tempotron: epochs must be >= 0");

  std::vector<PreparedPattern> prepared;
  prepared.reserve(patterns.size());
  for (const auto& p : patterns) prepared.emplace_back(p, model);

  std::vector<int> target(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const auto it = std::find(model.class_labels.begin(), model.class_labels.end(), labels[i]);
    if (it == model.class_labels.end()) {
      throw TrainingError("train_tempotron: label '" + labels[i] + "' not in model");
    }
    target[i] = static_cast<int>(it - model.class_labels.begin());
  }

  model.epochs = epochs;
  model.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(patterns.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (trace != nullptr) trace->errors_per_epoch.clear();

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    int errors = 0;
    for (std::size_t i : order) {
      const auto& pp = prepared[i];
      for (int c = 0; c < model.n_classes; ++c) {
        auto w = model.row(c);
        const auto pk = pp.peak(w);
        const bool is_target = target[i] == c;
        const bool fired = pk.value >= model.v_threshold;
        if (is_target == fired) continue;
        ++errors;
        const double step = is_target ? model.learn_rate : -model.learn_rate;
        const auto grad = pp.kernel_sums(pk.time);
        for (std::size_t n = 0; n < w.size(); ++n) w[n] += step * grad[n];
      }
    }
    if (trace != nullptr) trace->errors_per_epoch.push_back(errors);
    if (errors == 0) break;
  }
  return model;
}

TempotronModel fit_tempotron(std::span<const SpikePattern> patterns,
                             std::span<const std::string> labels, const TempotronParams& params,
                             std::uint64_t seed, TempotronTrace* trace) {
  if (patterns.empty()) throw TrainingError("fit_tempotron: empty training set");
  auto model = make_tempotron(patterns.front().n_neurons(), class_list(labels), params, seed);
  return train_tempotron(patterns, labels, std::move(model), params.epochs, seed, trace);
}

std::vector<double> class_peaks(const TempotronModel& model, const SpikePattern& pattern) {
  const PreparedPattern pp(pattern, model);
  std::vector<double> peaks(static_cast<std::size_t>(model.n_classes));
  for (int c = 0; c < model.n_classes; ++c) peaks[static_cast<std::size_t>(c)] = pp.peak(model.row(c)).value;
  return peaks;
}

std::string classify(const TempotronModel& model, const SpikePattern& pattern) {
  const auto peaks = class_peaks(model, pattern);
  const bool any_fired = std::any_of(peaks.begin(), peaks.end(),
                                     [&](double v) { return v >= model.v_threshold; });
  std::size_t best = peaks.size();
  for (std::size_t c = 0; c < peaks.size(); ++c) {
    if (any_fired && peaks[c] < model.v_threshold) continue;
    if (best == peaks.size() || peaks[c] > peaks[best]) best = c;
  }
  return model.class_labels[best];
}

std::string tempotron_model_to_text(const TempotronModel& m) {
  model_text::Writer w("tempotron-model");
  w.field("n_classes", m.n_classes);
  w.field("n_afferents", m.n_afferents);
  w.field("tau_m", m.tau_m);
  w.field("tau_s", m.tau_s);
  w.field("v_threshold", m.v_threshold);
  w.field("v_rest", m.v_rest);
  w.field("learn_rate", m.learn_rate);
  w.field("kernel_norm", m.kernel_norm);
  w.field("grid_step", m.grid_step);
  w.field("epochs", m.epochs);
  w.field("seed", m.seed);
  for (const auto& label : m.class_labels) w.field("label", label);
  for (int c = 0; c < m.n_classes; ++c) w.row("w", m.row(c));
  return w.str();
}

TempotronModel tempotron_model_from_text(std::string_view text) {
  model_text::Reader r(text, "tempotron-model");
  TempotronModel m;
  m.n_classes = static_cast<int>(r.integer("n_classes"));
  m.n_afferents = static_cast<int>(r.integer("n_afferents"));
  if (m.n_classes < 1 || m.n_afferents < 1) throw ParseError("invalid model shape");
  m.tau_m = r.real("tau_m");
  m.tau_s = r.real("tau_s");
  m.v_threshold = r.real("v_threshold");
  m.v_rest = r.real("v_rest");
  m.learn_rate = r.real("learn_rate");
  m.kernel_norm = r.real("kernel_norm");
  m.grid_step = r.real("grid_step");
  m.epochs = static_cast<int>(r.integer("epochs"));
  m.seed = static_cast<std::uint64_t>(r.integer("seed"));
  for (int c = 0; c < m.n_classes; ++c) m.class_labels.push_back(r.text("label"));
  m.weights.reserve(static_cast<std::size_t>(m.n_classes) * m.n_afferents);
  for (int c = 0; c < m.n_classes; ++c) {
    const auto w = r.row("w", static_cast<std::size_t>(m.n_afferents));
    m.weights.insert(m.weights.end(), w.begin(), w.end());
  }
  r.finish();
  return m;
}

void save_tempotron_model(const TempotronModel& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, tempotron_model_to_text(model));
}

TempotronModel load_tempotron_model(const std::filesystem::path& path) {
  return tempotron_model_from_text(io::read_file(path));
}

}  // namespace spikecode
