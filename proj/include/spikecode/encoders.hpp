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
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "spikecode/frontend.hpp"
#include "spikecode/spike_pattern.hpp"

// Spike encoders. Every row is one spectrogram channel: a sequence of
// normalized intensities x_1..x_N in [0, 1], one per encoding window.
//
// Neuron ids are channel-major:
//   single-neuron codes   id = channel
//   population codes      id = channel * n_fields + field
//   threshold code        id = channel * 2K + 2k     (onset)
//                         id = channel * 2K + 2k + 1 (offset)
namespace spikecode {

struct LatencyConfig {
  double rate_r = 100.0;  // encoding windows per second
  double min_intensity_eps = 0.01;
};

struct PhaseConfig {
  LatencyConfig base;
  double smo_freq = 200.0;  // Hz, shared by all oscillators
  double phase_step = 2.0 * std::numbers::pi / 20.0;  // channel c has phase c * phase_step
};

struct PopulationConfig {
  Scheme base_scheme = Scheme::Latency;  // Latency or Phase
  PhaseConfig phase;                     // phase.base is used for the latency stage
  int n_fields = 10;
  std::optional<double> sigma;  // seconds; default window / (1.5 * (n_fields - 1))
  double min_response_gamma = 0.1;
  // Snap each population spike to the SMO peak of its own neuron
  // (phase neuron_id * phase_step). Only meaningful for a Phase base.
  bool resnap = false;

  double window() const { return 1.0 / phase.base.rate_r; }
  double resolved_sigma() const {
    return sigma.value_or(window() / (1.5 * (n_fields - 1)));
  }
  double field_center(int j) const { return window() * j / (n_fields - 1); }
};

struct ThresholdConfig {
  std::vector<double> thresholds = default_thresholds(10);

  /// K evenly spaced levels (k + 0.5) / K.
  static std::vector<double> default_thresholds(int k);
};

struct EncoderConfig {
  std::variant<LatencyConfig, PhaseConfig, PopulationConfig, ThresholdConfig> params;

  Scheme scheme() const;
  /// Encoding neurons per spectrogram channel.
  int neurons_per_channel() const;

  static EncoderConfig latency(LatencyConfig c = {}) { return {c}; }
  static EncoderConfig phase(PhaseConfig c = {}) { return {c}; }
  static EncoderConfig population(PopulationConfig c = {}) { return {c}; }
  static EncoderConfig threshold(ThresholdConfig c = {}) { return {c}; }
  /// Default configuration for `scheme`.
  static EncoderConfig defaults(Scheme scheme);
};

void validate(const LatencyConfig& cfg);
void validate(const PhaseConfig& cfg);
void validate(const PopulationConfig& cfg);
void validate(const ThresholdConfig& cfg);

/// t_i = (i - x_i) / r for 1-based window i, skipping x_i < min_intensity_eps.
SpikeTrain encode_latency(std::span<const double> row, const LatencyConfig& cfg, int channel);

/// Peak of cos(2*pi*f*t + phase) nearest to t; ties go to the earlier peak.
/// Clamped to >= 0.
double smo_nearest_peak(double t, double smo_freq, double phase);

/// Latency spikes snapped to the channel's oscillator peaks, duplicates collapsed.
/// Snapping is restricted to peaks inside [0, row.size() / r]; a spike with
/// no peak in that range is dropped.
SpikeTrain encode_phase(std::span<const double> row, const PhaseConfig& cfg, int channel);

inline double receptive_field_response(double t_in, double mu, double sigma) {
  const double d = t_in - mu;
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

/// n_fields trains, ids channel * n_fields + j.
std::vector<SpikeTrain> encode_population(std::span<const double> row,
                                          const PopulationConfig& cfg, int channel);

struct Crossings {
  std::vector<double> onsets;
  std::vector<double> offsets;
};

/// Linear-interpolated threshold crossings, 0-based frame i placed at (i + 1) * frame_stride.
/// A frame exactly at theta counts as above.
Crossings detect_crossings(std::span<const double> row, double theta, double frame_stride);

/// 2K trains, ids channel * 2K + 2k (onset) and + 1 (offset).
std::vector<SpikeTrain> encode_threshold(std::span<const double> row, const ThresholdConfig& cfg,
                                         int channel, double frame_stride);

/// Encodes every channel. duration = n_frames * frame_stride. For the
/// window-based schemes rate_r must equal 1 / frame_stride.
SpikePattern encode(const Spectrogram& spectrogram, const EncoderConfig& cfg);

}  // namespace spikecode
