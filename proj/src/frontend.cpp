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

#include "spikecode/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

double FilterbankSpec::resolved_f_high(double sample_rate) const {
  return f_high.value_or(std::min(8000.0, 0.45 * sample_rate));
}

double Biquad::magnitude(double freq_hz, double sample_rate) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2));
}

void validate_filterbank(const FilterbankSpec& spec, double sample_rate) {
  if (spec.n_channels < 1) throw ConfigError("filterbank: n_channels must be >= 1");
  if (!(sample_rate > 0)) throw ConfigError("filterbank: sample_rate must be > 0");
  const double f_high = spec.resolved_f_high(sample_rate);
  if (!(spec.f_low > 0)) throw ConfigError("filterbank: f_low must be > 0");
  if (spec.n_channels > 1 && !(spec.f_low < f_high)) {
    throw ConfigError("filterbank: f_low must be below f_high");
  }
  if (f_high > sample_rate / 2) throw ConfigError("filterbank: f_high above Nyquist");
  if (!(spec.q_factor > 0)) throw ConfigError("filterbank: q_factor must be > 0");
  if (!(spec.frame_length > 0) || !(spec.frame_stride > 0)) {
    throw ConfigError("filterbank: frame_length and frame_stride must be > 0");
  }
}

namespace {

// Analog band-pass prototype H(s) = B s / (s^2 + B s + W0^2) with band edges
// pre-warped, mapped through the bilinear transform.
Biquad bandpass_section(double f1, double f2, double sample_rate) {
  const double w1 = std::tan(std::numbers::pi * f1 / sample_rate);
  const double w2 = std::tan(std::numbers::pi * f2 / sample_rate);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;
  const double a0 = 1.0 + bw + w0sq;
  Biquad q;
  q.b0 = bw / a0;
  q.b1 = 0.0;
  q.b2 = -bw / a0;
  q.a1 = 2.0 * (w0sq - 1.0) / a0;
  q.a2 = (1.0 - bw + w0sq) / a0;
  return q;
}

}  // namespace

FilterCoefficients design_filterbank(const FilterbankSpec& spec, double sample_rate) {
  validate_filterbank(spec, sample_rate);
  const double f_high = spec.resolved_f_high(sample_rate);
  FilterCoefficients bank;
  bank.sample_rate = sample_rate;
  bank.channels.reserve(static_cast<std::size_t>(spec.n_channels));
  const double half = 1.0 / (2.0 * spec.q_factor);
  for (int c = 0; c < spec.n_channels; ++c) {
    const double frac = spec.n_channels == 1 ? 0.0 : static_cast<double>(c) / (spec.n_channels - 1);
    const double center = spec.f_low * std::pow(f_high / spec.f_low, frac);
    const double bandwidth = center / spec.q_factor;
    // Digital edges e1 < e2 with e2 - e1 = bandwidth whose warped values have the
    // warped center as geometric mean, so the peak lands exactly on the center.
    const double nyq = 0.499 * sample_rate;
    const double w0 = std::tan(std::numbers::pi * center / sample_rate);
    auto warp = [&](double f) { return std::tan(std::numbers::pi * f / sample_rate); };
    double lo = 0.0;
    double hi = std::min(center, nyq - bandwidth);
    double f1 = 0.0;
    double f2 = 0.0;
    if (hi <= 0.0) {
      // Band too wide to fit below Nyquist; fall back to the analog-symmetric edges.
      f1 = center * (std::sqrt(1.0 + half * half) - half);
      f2 = std::min(f1 + bandwidth, nyq);
    } else {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (warp(mid) * warp(mid + bandwidth) < w0 * w0) lo = mid; else hi = mid;
      }
      f1 = 0.5 * (lo + hi);
      f2 = f1 + bandwidth;
    }
    bank.channels.push_back({center, bandwidth, bandpass_section(f1, f2, sample_rate), 2});
  }
  return bank;
}

int frame_count(std::size_t n_samples, double sample_rate, double frame_length,
                double frame_stride) {
  const auto len = static_cast<std::size_t>(std::llround(frame_length * sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(frame_stride * sample_rate));
  if (len == 0 || hop == 0 || n_samples < len) return 0;
  return static_cast<int>((n_samples - len) / hop + 1);
}

std::vector<double> filter_channel(std::span<const double> samples, const ChannelFilter& channel) {
  std::vector<double> y(samples.begin(), samples.end());
  const Biquad& q = channel.section;
  for (int stage = 0; stage < channel.stages; ++stage) {
    double s1 = 0.0, s2 = 0.0;  // transposed direct form II state
    for (double& v : y) {
      const double x = v;
      const double out = q.b0 * x + s1;
      s1 = q.b1 * x - q.a1 * out + s2;
      s2 = q.b2 * x - q.a2 * out;
      v = out;
    }
  }
  return y;
}

Spectrogram analyze(const AudioClip& clip, const FilterbankSpec& spec) {
  validate_clip(clip);
  return analyze(clip, spec, design_filterbank(spec, clip.sample_rate));
}

Spectrogram analyze(const AudioClip& clip, const FilterbankSpec& spec,
                    const FilterCoefficients& bank) {
  validate_clip(clip);
  if (bank.sample_rate != clip.sample_rate ||
      bank.channels.size() != static_cast<std::size_t>(spec.n_channels)) {
    throw ConfigError("analyze: filterbank was designed for a different configuration");
  }
  const int n_frames =
      frame_count(clip.samples.size(), clip.sample_rate, spec.frame_length, spec.frame_stride);
  if (n_frames < 1) {
    throw IngestionError("clip '" + clip.id + "' is shorter than one frame");
  }
  const auto len = static_cast<std::size_t>(std::llround(spec.frame_length * clip.sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(spec.frame_stride * clip.sample_rate));

  Spectrogram out;
  out.n_channels = spec.n_channels;
  out.n_frames = n_frames;
  out.frame_length = spec.frame_length;
  out.frame_stride = spec.frame_stride;
  out.clip_id = clip.id;
  out.values.resize(static_cast<std::size_t>(spec.n_channels) * n_frames);

  for (int c = 0; c < spec.n_channels; ++c) {
    const auto band = filter_channel(clip.samples, bank.channels[static_cast<std::size_t>(c)]);
    for (int f = 0; f < n_frames; ++f) {
      const std::size_t start = static_cast<std::size_t>(f) * hop;
      double energy = 0.0;
      for (std::size_t k = start; k < start + len; ++k) energy += band[k] * band[k];
      out.values[static_cast<std::size_t>(c) * n_frames + f] = std::log(kLogEnergyFloor + energy);
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(out.values.begin(), out.values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi > lo) {
    const double span = hi - lo;
    for (double& v : out.values) v = std::clamp((v - lo) / span, 0.0, 1.0);
  } else {
    std::fill(out.values.begin(), out.values.end(), 0.0);
  }
  return out;
}

std::string spectrogram_to_csv(const Spectrogram& spec) {
  std::string out = "channel,frame,value\n";
  for (int c = 0; c < spec.n_channels; ++c) {
    for (int f = 0; f < spec.n_frames; ++f) {
      out += std::to_string(c);
      out += ',';
      out += std::to_string(f);
      out += ',';
      out += io::format_double("%.9g", spec.at(c, f));
      out += '\n';
    }
  }
  return out;
}

}  // namespace spikecode
