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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spikecode/audio.hpp"

namespace spikecode {

/// Constant-Q bank description. An unset f_high resolves per clip to
/// min(8000 Hz, 0.45 * sample_rate).
struct FilterbankSpec {
  int n_channels = 20;
  double f_low = 100.0;
  std::optional<double> f_high;
  double q_factor = 8.0;
  double frame_length = 0.020;
  double frame_stride = 0.010;

  double resolved_f_high(double sample_rate) const;
};

/// Normalized (a0 == 1) second-order section.
struct Biquad {
  double b0 = 0, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;

  /// Magnitude response at `freq_hz`.
  double magnitude(double freq_hz, double sample_rate) const;
};

struct ChannelFilter {
  double center_hz = 0;
  double bandwidth_hz = 0;  // -3 dB width of one section
  Biquad section;
  int stages = 2;  // identical sections in cascade
};

struct FilterCoefficients {
  double sample_rate = 0;
  std::vector<ChannelFilter> channels;
};

/// Channel-major matrix of normalized log energies in [0, 1].
struct Spectrogram {
  int n_channels = 0;
  int n_frames = 0;
  double frame_stride = 0.010;
  double frame_length = 0.020;
  std::string clip_id;
  std::vector<double> values;

  double at(int channel, int frame) const {
    return values[static_cast<std::size_t>(channel) * n_frames + frame];
  }
  std::span<const double> row(int channel) const {
    return {values.data() + static_cast<std::size_t>(channel) * n_frames,
            static_cast<std::size_t>(n_frames)};
  }
};

/// Floor added inside the log so silent frames stay finite.
inline constexpr double kLogEnergyFloor = 1e-10;

/// Validates `spec` against `sample_rate`; throws ConfigError.
void validate_filterbank(const FilterbankSpec& spec, double sample_rate);

/// Centers f_low * (f_high/f_low)^(c/(n-1)); one bilinear section per channel
/// with unity gain at the center and digital -3 dB edges center/q_factor apart,
/// placed so their pre-warped values have the pre-warped center as geometric mean.
FilterCoefficients design_filterbank(const FilterbankSpec& spec, double sample_rate);

/// Number of complete frames in `n_samples`; 0 when shorter than one frame.
int frame_count(std::size_t n_samples, double sample_rate, double frame_length,
                double frame_stride);

/// Filterbank -> framing -> log energy -> per-clip min-max normalization.
/// A constant pre-normalization matrix maps to all zeros.
Spectrogram analyze(const AudioClip& clip, const FilterbankSpec& spec);
Spectrogram analyze(const AudioClip& clip, const FilterbankSpec& spec,
                    const FilterCoefficients& bank);

/// Sub-band signal of one channel (both cascade stages applied).
std::vector<double> filter_channel(std::span<const double> samples, const ChannelFilter& channel);

/// CSV with header `channel,frame,value`, 9 significant digits.
std::string spectrogram_to_csv(const Spectrogram& spec);

}  // namespace spikecode
