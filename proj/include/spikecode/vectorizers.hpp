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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spikecode/spike_pattern.hpp"

namespace spikecode {

/// V1 collapses time to duration-scaled spike counts; V2 keeps a
/// neuron x time-bin grid of in-bin spike timings.
enum class VectorScheme { V1, V2 };

std::string_view vector_scheme_name(VectorScheme s);
VectorScheme parse_vector_scheme(std::string_view name);

struct FeatureVector {
  std::vector<double> values;
  VectorScheme scheme = VectorScheme::V1;
  std::string clip_id;

  std::size_t length() const { return values.size(); }
};

struct VectorizerConfig {
  VectorScheme scheme = VectorScheme::V1;
  int n_time_bins = 0;         // V2
  double mean_duration = 0.0;  // V1, estimated on the training split
  double window = 0.010;       // V2 encoding window (frame stride); 0 = continuous bins
};

/// value_n = count_n * mean_duration / duration.
FeatureVector vectorize_rate(const SpikePattern& p, const VectorizerConfig& cfg);

/// Neuron x N_T grid, element index n * N_T + b; empty cells are 0.
///
/// window > 0: the pattern's W = round(duration / window) encoding windows are
/// spread over the N_T bins (window k lands in bin floor(k N_T / W)), and a
/// cell holds (window_end - t_first) / window of its first spike.
/// window == 0: [0, duration] is cut into N_T equal bins and a cell holds
/// (bin_end - t_first) / bin_width.
/// Values are clamped to [1e-6, 1] in both modes.
FeatureVector vectorize_timing(const SpikePattern& p, const VectorizerConfig& cfg);

/// Dispatches on cfg.scheme.
FeatureVector vectorize(const SpikePattern& p, const VectorizerConfig& cfg);

/// Mean pattern duration.
double mean_duration(std::span<const SpikePattern> patterns);
/// Rounded mean frame count: round(mean(duration) / frame_stride), at least 1.
int default_time_bins(std::span<const SpikePattern> patterns, double frame_stride);

/// Dataset CSV: header `clip_id,label,v_0,...,v_{L-1}`, one row per vector.
std::string vectors_to_csv(std::span<const FeatureVector> vectors,
                           std::span<const std::string> labels);
/// Parses vectors_to_csv output back into (vector, label) pairs.
std::vector<std::pair<FeatureVector, std::string>> vectors_from_csv(std::string_view csv,
                                                                    VectorScheme scheme);

}  // namespace spikecode
