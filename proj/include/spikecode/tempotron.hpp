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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spikecode/spike_pattern.hpp"

// Tempotron pool: one leaky integrate-and-fire neuron per class, trained
// one-against-all on the time of its maximal membrane potential.
//
//   V(t) = sum_n w_n sum_{s in spikes(n), s <= t} K(t - s)
//   K(dt) = V0 (exp(-dt/tau_m) - exp(-dt/tau_s)),  dt >= 0
//
// There is no reset: only the peak of V over the pattern matters.
namespace spikecode {

struct TempotronParams {
  double tau_m = 0.020;
  double tau_s = 0.005;
  double learn_rate = 1e-3;
  double grid_step = 0.001;  // uniform part of the t_max search grid
  double init_max_weight = 1e-3;
  int epochs = 200;
};

struct TempotronModel {
  int n_classes = 0;
  int n_afferents = 0;
  std::vector<double> weights;  // n_classes x n_afferents, row-major
  double tau_m = 0.020;
  double tau_s = 0.005;
  double v_threshold = 1.0;
  double v_rest = 0.0;
  double learn_rate = 1e-3;
  double kernel_norm = 0.0;  // V0
  double grid_step = 0.001;
  std::vector<std::string> class_labels;
  int epochs = 0;
  std::uint64_t seed = 0;

  std::span<const double> row(int c) const {
    return {weights.data() + static_cast<std::size_t>(c) * n_afferents,
            static_cast<std::size_t>(n_afferents)};
  }
  std::span<double> row(int c) {
    return {weights.data() + static_cast<std::size_t>(c) * n_afferents,
            static_cast<std::size_t>(n_afferents)};
  }
  /// Time of the kernel maximum.
  double t_peak() const;

  friend bool operator==(const TempotronModel&, const TempotronModel&) = default;
};

/// 1 / max_t (exp(-t/tau_m) - exp(-t/tau_s)); requires tau_m > tau_s > 0.
double kernel_norm(double tau_m, double tau_s);
/// tau_m tau_s ln(tau_m / tau_s) / (tau_m - tau_s).
double kernel_peak_time(double tau_m, double tau_s);

inline double psp_kernel(double dt, double tau_m, double tau_s, double v0) {
  if (dt < 0) return 0.0;
  return v0 * (std::exp(-dt / tau_m) - std::exp(-dt / tau_s));
}

/// Fresh model with weights drawn uniformly from [0, init_max_weight].
TempotronModel make_tempotron(int n_afferents, std::vector<std::string> class_labels,
                              const TempotronParams& params, std::uint64_t seed);

/// Direct kernel sum at time t (causal: spikes after t contribute nothing).
double membrane_potential(const SpikePattern& pattern, std::span<const double> weights,
                          const TempotronModel& model, double t);

struct PeakPotential {
  double time = 0.0;
  double value = 0.0;
};

/// Spike times plus the evaluation grid for one pattern. Depends only on the
/// pattern and kernel constants, so it can be reused across epochs.
class PreparedPattern {
 public:
  PreparedPattern(const SpikePattern& pattern, const TempotronModel& model);

  int n_afferents() const { return n_afferents_; }
  /// Maximum of V over the grid; the earliest time wins ties.
  PeakPotential peak(std::span<const double> weights) const;
  /// Per-afferent sum_{s <= t} K(t - s), the gradient of V(t) w.r.t. w.
  std::vector<double> kernel_sums(double t) const;

 private:
  struct Step {
    int afferent;  // -1 for an evaluation point
    double time;
    double decay_m;  // factors from the previous step
    double decay_s;
  };
  int n_afferents_ = 0;
  double tau_m_, tau_s_, v0_;
  std::vector<Step> steps_;
};

/// Earliest maximum of V over the union of a uniform grid on [0, duration] and
/// every spike time shifted by t_peak.
PeakPotential peak_potential(const SpikePattern& pattern, std::span<const double> weights,
                             const TempotronModel& model);

struct TempotronTrace {
  std::vector<int> errors_per_epoch;
};

/// Tempotron rule at t_max: a silent target neuron gets w += lr * K-sums, a
/// firing non-target neuron gets w -= lr * K-sums. Pattern order is shuffled per
/// epoch from `seed`. Stops early once an epoch makes no update (later epochs
/// would be identical).
TempotronModel train_tempotron(std::span<const SpikePattern> patterns,
                               std::span<const std::string> labels, TempotronModel model,
                               int epochs, std::uint64_t seed, TempotronTrace* trace = nullptr);

/// Convenience: make_tempotron over the sorted label set, then train.
TempotronModel fit_tempotron(std::span<const SpikePattern> patterns,
                             std::span<const std::string> labels, const TempotronParams& params,
                             std::uint64_t seed, TempotronTrace* trace = nullptr);

/// Peak potential of every class neuron.
std::vector<double> class_peaks(const TempotronModel& model, const SpikePattern& pattern);

/// Among neurons whose peak reaches threshold (all neurons if none do), the
/// highest peak wins; ties go to the lowest class index.
std::string classify(const TempotronModel& model, const SpikePattern& pattern);

std::string tempotron_model_to_text(const TempotronModel& model);
TempotronModel tempotron_model_from_text(std::string_view text);
void save_tempotron_model(const TempotronModel& model, const std::filesystem::path& path);
TempotronModel load_tempotron_model(const std::filesystem::path& path);

}  // namespace spikecode
