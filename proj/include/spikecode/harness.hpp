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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spikecode/audio.hpp"
#include "spikecode/encoders.hpp"
#include "spikecode/frontend.hpp"
#include "spikecode/svm.hpp"
#include "spikecode/tempotron.hpp"
#include "spikecode/vectorizers.hpp"

namespace spikecode {

enum class Split { Train, Test };

std::string_view split_name(Split s);

// ---------------------------------------------------------------------------
// Manifest: CSV `path,label,split`, '#' comments, optional header row.
// Relative paths resolve against the manifest's directory.

struct ManifestEntry {
  std::filesystem::path path;
  std::string label;
  Split split = Split::Train;
};

struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& e) const {
    return e.path.is_absolute() ? e.path : root / e.path;
  }
};

/// Parses manifest text; ParseError carries the offending line.
Manifest parse_manifest(std::string_view text, const std::filesystem::path& root);
/// Parses and checks that every referenced WAV exists; the IngestionError
/// lists every missing path.
Manifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_csv(const Manifest& manifest);

// ---------------------------------------------------------------------------
// Synthetic corpora.

enum class Trajectory { UpChirp, DownChirp, LowHigh, HighLow };

struct Archetype {
  std::string label;
  Trajectory trajectory = Trajectory::UpChirp;
  double f_low = 300.0;   // Hz, chirp start/end or the low tone
  double f_high = 3000.0;  // Hz
};

/// The default class inventory: up-chirp, down-chirp, low-high and high-low
/// alternation, repeated over shifted bands when more than four are asked for.
std::vector<Archetype> default_archetypes(int n_classes);

struct SyntheticSpec {
  int n_classes = 4;
  int clips_per_class = 40;
  int sample_rate = 16000;
  double min_duration = 0.6;  // seconds
  double max_duration = 1.0;
  double noise_level = 0.005;     // std of additive white noise, full scale = 1
  double freq_jitter = 0.08;      // relative, log-uniform per clip
  double amplitude = 0.5;
  double attack = 0.01;           // seconds
  double decay = 1.0;             // envelope falls to exp(-decay) at clip end
  int alternation_segments = 10;  // tone levels visited by the alternation classes
  std::uint64_t seed = 42;
  std::vector<Archetype> archetypes;  // empty: default_archetypes(n_classes)
};

struct SyntheticCorpus {
  std::vector<AudioClip> clips;
  Manifest manifest;  // paths `wav/<clip id>.wav`
};

/// Deterministic in `spec.seed`; within every class even-numbered clips go
/// to train and odd-numbered clips to test.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

/// Writes wav/*.wav and manifest.csv under `dir`.
void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Experiments.

enum class Classifier { Svm, Tempotron };

std::string_view classifier_name(Classifier c);
Classifier parse_classifier(std::string_view name);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Spectrograms of one labeled corpus, split-separated.
struct SpectrogramSet {
  std::vector<Spectrogram> train, test;
  std::vector<std::string> train_labels, test_labels;
};

SpectrogramSet analyze_corpus(const Manifest& manifest, const FilterbankSpec& frontend,
                              int jobs = 1);
SpectrogramSet analyze_corpus(std::span<const AudioClip> clips, const Manifest& manifest,
                              const FilterbankSpec& frontend, int jobs = 1);

struct ExperimentConfig {
  FilterbankSpec frontend;
  EncoderConfig encoder;
  VectorScheme vectorizer = VectorScheme::V1;  // ignored by the Tempotron
  std::optional<int> n_time_bins;              // default: rounded mean train frame count
  bool v2_by_window = true;                    // V2 bins follow encoding windows
  Classifier classifier = Classifier::Svm;
  SvmOptions svm;
  TempotronParams tempotron;
  std::uint64_t seed = 42;
  int jobs = 1;
};

struct Metrics {
  double train_accuracy = 0.0;  // percent
  double test_accuracy = 0.0;
  std::vector<std::string> class_labels;
  std::vector<std::vector<int>> confusion;  // test split; [true][predicted]
  double wall_time = 0.0;                   // seconds
};

struct ExperimentResult {
  Scheme scheme = Scheme::Latency;
  std::optional<VectorScheme> vectorizer;  // unset for the Tempotron
  Classifier classifier = Classifier::Svm;
  int feature_length = 0;  // vector length (SVM) or afferent count (Tempotron)
  Metrics metrics;
  std::optional<LinearModel> svm_model;
  std::optional<TempotronModel> tempotron_model;
};

/// Trains on the train split only (mean duration and N_T included), then
/// scores both splits.
ExperimentResult run_experiment(const SpectrogramSet& data, const ExperimentConfig& cfg);
ExperimentResult run_experiment(const Manifest& manifest, const ExperimentConfig& cfg);

/// Percent of matching entries; empty input gives 0.
double accuracy_percent(std::span<const std::string> truth, std::span<const std::string> predicted);
std::vector<std::vector<int>> confusion_matrix(std::span<const std::string> labels,
                                               std::span<const std::string> truth,
                                               std::span<const std::string> predicted);

/// Encodes every spectrogram of the set (train then test).
std::vector<SpikePattern> encode_all(std::span<const Spectrogram> spectrograms,
                                     const EncoderConfig& cfg, int jobs = 1);

// ---------------------------------------------------------------------------
// Spike-rate statistics.

struct SpikeStats {
  Scheme scheme = Scheme::Latency;
  int n_neurons = 0;
  double total_rate = 0.0;       // spikes/s over all neurons
  double per_neuron_rate = 0.0;  // total_rate / n_neurons
};

/// total = sum(spikes) / sum(durations). Patterns must share scheme and size;
/// an empty list yields zeros.
SpikeStats spike_rate_stats(std::span<const SpikePattern> patterns);

// ---------------------------------------------------------------------------
// Reports.

/// Round to one decimal, as printed in the tables.
double round1(double percent);

/// JSON report with keys config, metrics, stats, versions in that order.
/// `config_json` is embedded verbatim (must be a JSON document).
std::string report_json(std::span<const ExperimentResult> results,
                        std::span<const SpikeStats> stats, std::string_view config_json);

/// `scheme,vector_length_v1,train_v1,test_v1,vector_length_v2,train_v2,test_v2`,
/// one row per scheme with SVM results, in first-seen order.
std::string accuracy_csv(std::span<const ExperimentResult> results);
/// `scheme,n_afferents,train,test` for Tempotron results.
std::string snn_accuracy_csv(std::span<const ExperimentResult> results);

/// Writes report.json, accuracy.csv and snn_accuracy.csv into `dir`.
void export_report(std::span<const ExperimentResult> results, std::span<const SpikeStats> stats,
                   std::string_view config_json, const std::filesystem::path& dir);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace spikecode
