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

#include <cstdint>
#include <iterator>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spikecode/encoders.hpp"
#include "spikecode/frontend.hpp"
#include "spikecode/harness.hpp"
#include "spikecode/svm.hpp"
#include "spikecode/tempotron.hpp"
#include "spikecode/vectorizers.hpp"

namespace spikecode {

/// Everything a CLI run needs, loadable from JSON. Every key is optional;
/// unknown keys are rejected with their dotted path in the message.
///
///   {
///     "seed": 42, "jobs": 1,
///     "frontend":   {"n_channels", "f_low", "f_high", "q_factor", "frame_length", "frame_stride"},
///     "encoder":    {"schemes", "min_intensity_eps", "smo_freq", "phase_step", "n_fields",
///                    "sigma", "min_response_gamma", "resnap", "thresholds"},
///     "vectorizer": {"vectorizers", "n_time_bins", "by_window"},
///     "classifiers": ["svm", "tempotron"],
///     "svm":        {"lambda", "epochs", "tolerance", "max_passes", "solver"},
///     "tempotron":  {"tau_m", "tau_s", "learn_rate", "grid_step", "init_max_weight", "epochs"},
///     "synthetic":  {"n_classes", "clips_per_class", "sample_rate", "min_duration",
///                    "max_duration", "noise_level", "freq_jitter", "amplitude", "attack",
///                    "decay", "alternation_segments"}
///   }
///
/// "thresholds" takes a list of levels or an integer K (evenly spaced levels).
/// The single seed drives the SVM shuffle, Tempotron init and the synthetic corpus.
struct RunConfig {
  std::uint64_t seed = 42;
  int jobs = 1;
  FilterbankSpec frontend;

  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  double min_intensity_eps = 0.01;
  double smo_freq = 200.0;
  double phase_step = PhaseConfig{}.phase_step;
  int n_fields = 10;
  std::optional<double> sigma;
  double min_response_gamma = 0.1;
  bool resnap = false;
  std::vector<double> thresholds = ThresholdConfig::default_thresholds(10);

  std::vector<VectorScheme> vectorizers{VectorScheme::V1, VectorScheme::V2};
  std::optional<int> n_time_bins;
  bool v2_by_window = true;

  std::vector<Classifier> classifiers{Classifier::Svm, Classifier::Tempotron};
  SvmOptions svm;
  TempotronParams tempotron;
  SyntheticSpec synthetic;

  /// Encoder for `scheme`; the window rate is tied to the frame stride.
  EncoderConfig encoder(Scheme scheme) const;
  ExperimentConfig experiment(Scheme scheme, VectorScheme vectorizer, Classifier classifier) const;
  SyntheticSpec synthetic_spec() const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Parses JSON text over the defaults. Throws ConfigError.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// The effective configuration as pretty-printed JSON (stable key order).
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace spikecode
