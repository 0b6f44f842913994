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

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spikecode {

enum class Scheme { Latency, Phase, PopLatency, PopPhase, Threshold };

inline constexpr Scheme kAllSchemes[] = {Scheme::Latency, Scheme::Phase, Scheme::PopLatency,
                                         Scheme::PopPhase, Scheme::Threshold};

/// "latency", "phase", "pop_latency", "pop_phase", "threshold".
std::string_view scheme_name(Scheme scheme);
/// Inverse of scheme_name; also accepts hyphenated spellings. Throws ConfigError.
Scheme parse_scheme(std::string_view name);

struct SpikeTrain {
  int neuron_id = 0;
  std::vector<double> times;  // strictly increasing, seconds
};

/// Dense per-neuron storage: trains[n].neuron_id == n for every n < n_neurons.
struct SpikePattern {
  std::vector<SpikeTrain> trains;
  double duration = 0.0;
  std::string clip_id;
  Scheme scheme = Scheme::Latency;

  SpikePattern() = default;
  SpikePattern(int n_neurons, double duration, std::string clip_id, Scheme scheme);

  int n_neurons() const { return static_cast<int>(trains.size()); }
  std::size_t total_spikes() const;
  const std::vector<double>& times(int neuron) const {
    return trains[static_cast<std::size_t>(neuron)].times;
  }
};

/// Throws EncodingError when an invariant of SpikePattern is violated.
void validate_pattern(const SpikePattern& pattern);

/// CSV with header `neuron_id,time_s`, rows sorted by (neuron, time), 9 decimals.
std::string pattern_to_csv(const SpikePattern& pattern);
/// Key-value sidecar: scheme, n_neurons, duration, clip_id.
std::string pattern_metadata(const SpikePattern& pattern);
SpikePattern pattern_from_text(std::string_view csv, std::string_view metadata);

/// Writes `<stem>.csv` and `<stem>.meta` into `dir`.
void save_pattern(const SpikePattern& pattern, const std::filesystem::path& dir,
                  const std::string& stem);
/// Loads a pattern from its CSV path; the sidecar is the same path with `.meta`.
SpikePattern load_pattern(const std::filesystem::path& csv_path);

}  // namespace spikecode
