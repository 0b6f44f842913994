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

#include "spikecode/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spikecode/error.hpp"

namespace spikecode {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_row(std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0 && row[i] <= 1.0)) {
      throw EncodingError("intensity at window " + std::to_string(i + 1) + " outside [0, 1]");
    }
  }
}

double peak_time(double k, double smo_freq, double phase) {
  return (k - phase / (2.0 * std::numbers::pi)) / smo_freq;
}

// Nearest peak to t among peaks inside [lo, hi]; ties go to the earlier one.
// NaN when no peak lies in the interval.
double nearest_peak_within(double t, double smo_freq, double phase, double lo, double hi) {
  const double offset = phase / (2.0 * std::numbers::pi);
  const double x = t * smo_freq + offset;
  const double k_lo = std::floor(x);
  const double k_hi = k_lo + 1.0;
  double k = (k_hi - x) < (x - k_lo) ? k_hi : k_lo;
  double p = peak_time(k, smo_freq, phase);
  if (p < lo && peak_time(k + 1.0, smo_freq, phase) <= hi) {
    p = peak_time(k + 1.0, smo_freq, phase);
  } else if (p > hi && peak_time(k - 1.0, smo_freq, phase) >= lo) {
    p = peak_time(k - 1.0, smo_freq, phase);
  }
  if (p < lo || p > hi) return std::numeric_limits<double>::quiet_NaN();
  return p;
}

// Preliminary (latency or phase) spike times, one per surviving window,
// paired with their 1-based window index.
struct Preliminary {
  int window;
  double time;
};

std::vector<Preliminary> preliminary_times(std::span<const double> row, const LatencyConfig& cfg,
                                           const PhaseConfig* phase, int channel) {
  check_row(row);
  std::vector<Preliminary> out;
  out.reserve(row.size());
  const double horizon = static_cast<double>(row.size()) / cfg.rate_r;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] < cfg.min_intensity_eps) continue;
    const int i = static_cast<int>(k) + 1;
    double t = (i - row[k]) / cfg.rate_r;
    if (phase != nullptr) {
      t = nearest_peak_within(t, phase->smo_freq, channel * phase->phase_step, 0.0, horizon);
      if (std::isnan(t)) continue;  // SMO slower than the clip: no peak to lock to
    }
    out.push_back({i, t});
  }
  return out;
}

void collapse_duplicates(std::vector<double>& times) {
  times.erase(std::unique(times.begin(), times.end()), times.end());
}

}  // namespace

std::vector<double> ThresholdConfig::default_thresholds(int k) {
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = (i + 0.5) / k;
  return out;
}

Scheme EncoderConfig::scheme() const {
  return std::visit(overloaded{
                        [](const LatencyConfig&) { return Scheme::Latency; },
                        [](const PhaseConfig&) { return Scheme::Phase; },
                        [](const PopulationConfig& c) {
                          return c.base_scheme == Scheme::Phase ? Scheme::PopPhase
                                                                : Scheme::PopLatency;
                        },
                        [](const ThresholdConfig&) { return Scheme::Threshold; },
                    },
                    params);
}

int EncoderConfig::neurons_per_channel() const {
  return std::visit(overloaded{
                        [](const LatencyConfig&) { return 1; },
                        [](const PhaseConfig&) { return 1; },
                        [](const PopulationConfig& c) { return c.n_fields; },
                        [](const ThresholdConfig& c) {
                          return 2 * static_cast<int>(c.thresholds.size());
                        },
                    },
                    params);
}

EncoderConfig EncoderConfig::defaults(Scheme scheme) {
  switch (scheme) {
    case Scheme::Latency: return latency();
    case Scheme::Phase: return phase();
    case Scheme::PopLatency: return population();
    case Scheme::PopPhase: {
      PopulationConfig c;
      c.base_scheme = Scheme::Phase;
      return population(c);
    }
    case Scheme::Threshold: return threshold();
  }
  throw ConfigError("unknown scheme");
}

void validate(const LatencyConfig& cfg) {
  if (!(cfg.rate_r > 0)) throw ConfigError("latency: rate_r must be > 0");
  if (!(cfg.min_intensity_eps >= 0 && cfg.min_intensity_eps < 1)) {
    throw ConfigError("latency: min_intensity_eps must be in [0, 1)");
  }
}

void validate(const PhaseConfig& cfg) {
  validate(cfg.base);
  if (!(cfg.smo_freq > 0)) throw ConfigError("phase: smo_freq must be > 0");
  if (!std::isfinite(cfg.phase_step)) throw ConfigError("phase: phase_step must be finite");
}

void validate(const PopulationConfig& cfg) {
  if (cfg.base_scheme == Scheme::Phase) {
    validate(cfg.phase);
  } else if (cfg.base_scheme == Scheme::Latency) {
    validate(cfg.phase.base);
  } else {
    throw ConfigError("population: base scheme must be latency or phase");
  }
  if (cfg.n_fields < 2) throw ConfigError("population: n_fields must be >= 2");
  if (!(cfg.resolved_sigma() > 0)) throw ConfigError("population: sigma must be > 0");
  if (!(cfg.min_response_gamma > 0 && cfg.min_response_gamma <= 1)) {
    throw ConfigError("population: min_response_gamma must be in (0, 1]");
  }
}

void validate(const ThresholdConfig& cfg) {
  if (cfg.thresholds.empty()) throw ConfigError("threshold: at least one threshold required");
  for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
    const double th = cfg.thresholds[k];
    if (!(th > 0 && th < 1)) throw ConfigError("threshold: values must lie in (0, 1)");
    if (k > 0 && !(th > cfg.thresholds[k - 1])) {
      throw ConfigError("threshold: values must be strictly increasing");
    }
  }
}

SpikeTrain encode_latency(std::span<const double> row, const LatencyConfig& cfg, int channel) {
  validate(cfg);
  SpikeTrain train{channel, {}};
  for (const auto& p : preliminary_times(row, cfg, nullptr, channel)) train.times.push_back(p.time);
  return train;
}

double smo_nearest_peak(double t, double smo_freq, double phase) {
  if (!(smo_freq > 0)) throw ConfigError("smo_nearest_peak: smo_freq must be > 0");
  const double x = t * smo_freq + phase / (2.0 * std::numbers::pi);
  const double k_lo = std::floor(x);
  const double k = ((k_lo + 1.0) - x) < (x - k_lo) ? k_lo + 1.0 : k_lo;
  return std::max(0.0, peak_time(k, smo_freq, phase));
}

SpikeTrain encode_phase(std::span<const double> row, const PhaseConfig& cfg, int channel) {
  validate(cfg);
  SpikeTrain train{channel, {}};
  for (const auto& p : preliminary_times(row, cfg.base, &cfg, channel)) {
    train.times.push_back(p.time);
  }
  collapse_duplicates(train.times);
  return train;
}

std::vector<SpikeTrain> encode_population(std::span<const double> row,
                                          const PopulationConfig& cfg, int channel) {
  validate(cfg);
  const int n = cfg.n_fields;
  const double window = cfg.window();
  const double sigma = cfg.resolved_sigma();
  const bool phase = cfg.base_scheme == Scheme::Phase;

  std::vector<SpikeTrain> trains(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) trains[static_cast<std::size_t>(j)].neuron_id = channel * n + j;

  for (const auto& p :
       preliminary_times(row, cfg.phase.base, phase ? &cfg.phase : nullptr, channel)) {
    const double window_start = (p.window - 1) * window;
    const double u = std::clamp(p.time - window_start, 0.0, window);
    for (int j = 0; j < n; ++j) {
      const double g = receptive_field_response(u, cfg.field_center(j), sigma);
      if (g < cfg.min_response_gamma) continue;
      trains[static_cast<std::size_t>(j)].times.push_back(window_start + (1.0 - g) * window);
    }
  }

  if (phase && cfg.resnap) {
    const double horizon = static_cast<double>(row.size()) * window;
    for (auto& train : trains) {
      for (double& t : train.times) {
        t = nearest_peak_within(t, cfg.phase.smo_freq, train.neuron_id * cfg.phase.phase_step,
                                0.0, horizon);
      }
      std::erase_if(train.times, [](double t) { return std::isnan(t); });
      collapse_duplicates(train.times);
    }
  }
  return trains;
}

Crossings detect_crossings(std::span<const double> row, double theta, double frame_stride) {
  Crossings out;
  for (std::size_t i = 0; i + 1 < row.size(); ++i) {
    const double a = row[i], b = row[i + 1];
    const double t_i = static_cast<double>(i + 1) * frame_stride;
    if (a < theta && theta <= b) {
      out.onsets.push_back(t_i + frame_stride * (theta - a) / (b - a));
    } else if (a >= theta && theta > b) {
      out.offsets.push_back(t_i + frame_stride * (theta - a) / (b - a));
    }
  }
  return out;
}

std::vector<SpikeTrain> encode_threshold(std::span<const double> row, const ThresholdConfig& cfg,
                                         int channel, double frame_stride) {
  validate(cfg);
  check_row(row);
  const int k_count = static_cast<int>(cfg.thresholds.size());
  std::vector<SpikeTrain> trains(static_cast<std::size_t>(2 * k_count));
  for (int k = 0; k < k_count; ++k) {
    auto c = detect_crossings(row, cfg.thresholds[static_cast<std::size_t>(k)], frame_stride);
    auto& on = trains[static_cast<std::size_t>(2 * k)];
    auto& off = trains[static_cast<std::size_t>(2 * k + 1)];
    on.neuron_id = channel * 2 * k_count + 2 * k;
    off.neuron_id = on.neuron_id + 1;
    on.times = std::move(c.onsets);
    off.times = std::move(c.offsets);
  }
  return trains;
}

SpikePattern encode(const Spectrogram& spectrogram, const EncoderConfig& cfg) {
  if (spectrogram.n_channels < 1 || spectrogram.n_frames < 1) {
    throw EncodingError("encode: empty spectrogram");
  }
  const double stride = spectrogram.frame_stride;
  const auto check_rate = [&](const LatencyConfig& c) {
    if (std::abs(c.rate_r * stride - 1.0) > 1e-9) {
      throw ConfigError("encode: rate_r must equal 1 / frame_stride");
    }
  };
  const int per_channel = cfg.neurons_per_channel();
  SpikePattern pattern(spectrogram.n_channels * per_channel, spectrogram.n_frames * stride,
                       spectrogram.clip_id, cfg.scheme());

  const auto place = [&](std::vector<SpikeTrain>&& trains) {
    for (auto& t : trains) pattern.trains[static_cast<std::size_t>(t.neuron_id)] = std::move(t);
  };

  for (int c = 0; c < spectrogram.n_channels; ++c) {
    const auto row = spectrogram.row(c);
    std::visit(overloaded{
                   [&](const LatencyConfig& l) {
                     check_rate(l);
                     pattern.trains[static_cast<std::size_t>(c)] = encode_latency(row, l, c);
                   },
                   [&](const PhaseConfig& p) {
                     check_rate(p.base);
                     pattern.trains[static_cast<std::size_t>(c)] = encode_phase(row, p, c);
                   },
                   [&](const PopulationConfig& p) {
                     check_rate(p.phase.base);
                     place(encode_population(row, p, c));
                   },
                   [&](const ThresholdConfig& t) { place(encode_threshold(row, t, c, stride)); },
               },
               cfg.params);
  }
  return pattern;
}

}  // namespace spikecode
