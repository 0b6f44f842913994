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

#include "spikecode/vectorizers.hpp"

#include <algorithm>
#include <cmath>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

std::string_view vector_scheme_name(VectorScheme s) { return s == VectorScheme::V1 ? "v1" : "v2"; }

VectorScheme parse_vector_scheme(std::string_view name) {
  if (name == "v1" || name == "V1") return VectorScheme::V1;
  if (name == "v2" || name == "V2") return VectorScheme::V2;
  throw ConfigError("unknown vectorizer '" + std::string(name) + "'");
}

FeatureVector vectorize_rate(const SpikePattern& p, const VectorizerConfig& cfg) {
  if (cfg.scheme != VectorScheme::V1) throw ConfigError("vectorize_rate: scheme must be V1");
  if (!(cfg.mean_duration > 0)) throw ConfigError("vectorize_rate: mean_duration must be > 0");
  if (!(p.duration > 0)) throw VectorizationError("pattern '" + p.clip_id + "' has zero duration");
  const double scale = cfg.mean_duration / p.duration;
  FeatureVector v{std::vector<double>(p.trains.size()), VectorScheme::V1, p.clip_id};
  for (std::size_t n = 0; n < p.trains.size(); ++n) {
    v.values[n] = static_cast<double>(p.trains[n].times.size()) * scale;
  }
  return v;
}

FeatureVector vectorize_timing(const SpikePattern& p, const VectorizerConfig& cfg) {
  if (cfg.scheme != VectorScheme::V2) throw ConfigError("vectorize_timing: scheme must be V2");
  if (cfg.n_time_bins < 1) throw ConfigError("vectorize_timing: n_time_bins must be >= 1");
  if (!(p.duration > 0)) throw VectorizationError("pattern '" + p.clip_id + "' has zero duration");
  if (!(cfg.window >= 0)) throw ConfigError("vectorize_timing: window must be >= 0");
  const auto n_bins = static_cast<std::size_t>(cfg.n_time_bins);
  FeatureVector v{std::vector<double>(p.trains.size() * n_bins, 0.0), VectorScheme::V2, p.clip_id};

  // Maps a spike time to (bin, reference end, width).
  const bool by_window = cfg.window > 0;
  const double width = by_window ? cfg.window : p.duration / cfg.n_time_bins;
  const std::size_t n_units =
      by_window ? static_cast<std::size_t>(std::max(1L, std::lround(p.duration / cfg.window)))
                : n_bins;

  for (std::size_t n = 0; n < p.trains.size(); ++n) {
    double* row = v.values.data() + n * n_bins;
    for (double t : p.trains[n].times) {
      const double pos = t / width;
      auto k = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
      k = std::min(k, n_units - 1);
      const std::size_t b = by_window ? k * n_bins / n_units : k;
      if (row[b] != 0.0) continue;  // times are sorted: first spike wins
      row[b] = std::clamp(1.0 - (pos - static_cast<double>(k)), 1e-6, 1.0);
    }
  }
  return v;
}

FeatureVector vectorize(const SpikePattern& p, const VectorizerConfig& cfg) {
  return cfg.scheme == VectorScheme::V1 ? vectorize_rate(p, cfg) : vectorize_timing(p, cfg);
}

double mean_duration(std::span<const SpikePattern> patterns) {
  if (patterns.empty()) throw VectorizationError("mean_duration: no patterns");
  double sum = 0.0;
  for (const auto& p : patterns) sum += p.duration;
  return sum / static_cast<double>(patterns.size());
}

int default_time_bins(std::span<const SpikePattern> patterns, double frame_stride) {
  return std::max(1, static_cast<int>(std::lround(mean_duration(patterns) / frame_stride)));
}

std::string vectors_to_csv(std::span<const FeatureVector> vectors,
                           std::span<const std::string> labels) {
  if (vectors.size() != labels.size()) throw ShapeError("vectors_to_csv: label count mismatch");
  const std::size_t len = vectors.empty() ? 0 : vectors.front().length();
  std::string out = "clip_id,label";
  for (std::size_t i = 0; i < len; ++i) out += ",v_" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].length() != len) throw ShapeError("vectors_to_csv: ragged vectors");
    out += vectors[r].clip_id + "," + labels[r];
    for (double x : vectors[r].values) out += "," + io::exact(x);
    out += '\n';
  }
  return out;
}

std::vector<std::pair<FeatureVector, std::string>> vectors_from_csv(std::string_view csv,
                                                                    VectorScheme scheme) {
  std::vector<std::pair<FeatureVector, std::string>> out;
  std::size_t line_no = 0, width = 0;
  for (const auto& line : io::split(csv, '\n')) {
    ++line_no;
    const auto t = io::trim(line);
    if (t.empty()) continue;
    const auto fields = io::split(t, ',');
    if (line_no == 1) {
      if (fields.size() < 2 || fields[0] != "clip_id" || fields[1] != "label") {
        throw ParseError("expected header starting 'clip_id,label'", 1);
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != width) throw ParseError("field count differs from header", line_no);
    FeatureVector v{{}, scheme, fields[0]};
    v.values.reserve(width - 2);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      v.values.push_back(io::parse_double(fields[i], line_no));
    }
    out.emplace_back(std::move(v), fields[1]);
  }
  return out;
}

}  // namespace spikecode
