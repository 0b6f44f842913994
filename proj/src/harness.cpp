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

#include "spikecode/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "json.hpp"
#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

std::string_view split_name(Split s) { return s == Split::Train ? "train" : "test"; }

// ---------------------------------------------------------------------------
// Manifest

Manifest parse_manifest(std::string_view text, const std::filesystem::path& root) {
  Manifest m;
  m.root = root;
  std::size_t line_no = 0;
  bool first_row = true;
  for (const auto& raw : io::split(text, '\n')) {
    ++line_no;
    const auto line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split(line, ',');
    if (first_row) {
      first_row = false;
      if (fields.size() == 3 && io::trim(fields[0]) == "path" && io::trim(fields[1]) == "label" &&
          io::trim(fields[2]) == "split") {
        continue;
      }
    }
    if (fields.size() != 3) {
      throw ParseError("expected 'path,label,split', got " + std::to_string(fields.size()) +
                           " field(s)",
                       line_no);
    }
    const auto path = io::trim(fields[0]);
    const auto label = io::trim(fields[1]);
    const auto split = io::trim(fields[2]);
    if (path.empty()) throw ParseError("empty path", line_no);
    if (label.empty()) throw ParseError("missing label", line_no);
    ManifestEntry e{std::filesystem::path(std::string(path)), std::string(label), Split::Train};
    if (split == "train") {
      e.split = Split::Train;
    } else if (split == "test") {
      e.split = Split::Test;
    } else {
      throw ParseError("split must be 'train' or 'test', got '" + std::string(split) + "'",
                       line_no);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  Manifest m = parse_manifest(io::read_file(path), path.parent_path());
  std::string missing;
  for (const auto& e : m.entries) {
    if (!std::filesystem::exists(m.resolve(e))) {
      missing += (missing.empty() ? "" : ", ") + m.resolve(e).string();
    }
  }
  if (!missing.empty()) throw IngestionError("manifest references missing files: " + missing);
  return m;
}

std::string manifest_to_csv(const Manifest& manifest) {
  std::string out = "path,label,split\n";
  for (const auto& e : manifest.entries) {
    out += e.path.generic_string() + "," + e.label + "," + std::string(split_name(e.split)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpora

std::vector<Archetype> default_archetypes(int n_classes) {
  if (n_classes < 2) throw ConfigError("synthetic: n_classes must be >= 2");
  static constexpr Trajectory kinds[] = {Trajectory::UpChirp, Trajectory::DownChirp,
                                         Trajectory::LowHigh, Trajectory::HighLow};
  static constexpr const char* names[] = {"up_chirp", "down_chirp", "low_high", "high_low"};
  std::vector<Archetype> out;
  for (int c = 0; c < n_classes; ++c) {
    const int kind = c % 4;
    const int band = c / 4;
    Archetype a;
    a.trajectory = kinds[kind];
    a.label = names[kind];
    if (band > 0) a.label += "_b" + std::to_string(band);
    // Each extra band moves both frequencies up by half an octave.
    const double shift = std::pow(2.0, 0.5 * band);
    a.f_low = 300.0 * shift;
    a.f_high = 3000.0 * shift;
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

std::vector<double> synthesize_clip(const SyntheticSpec& spec, const Archetype& arch,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double duration = spec.min_duration + (spec.max_duration - spec.min_duration) * unit(rng);
  const double jitter = std::exp(spec.freq_jitter * (2.0 * unit(rng) - 1.0));
  const double f_lo = arch.f_low * jitter;
  const double f_hi = arch.f_high * jitter;
  const auto n = static_cast<std::size_t>(std::llround(duration * spec.sample_rate));
  const double fs = spec.sample_rate;
  const int segments = std::max(1, spec.alternation_segments);

  std::vector<double> out(n);
  double phase = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    const double u = t / duration;  // position in [0, 1)
    double f = f_lo;
    switch (arch.trajectory) {
      case Trajectory::UpChirp: f = f_lo * std::pow(f_hi / f_lo, u); break;
      case Trajectory::DownChirp: f = f_hi * std::pow(f_lo / f_hi, u); break;
      case Trajectory::LowHigh:
      case Trajectory::HighLow: {
        // Segments alternate between the lower and upper half of `segments`
        // log-spaced levels, each level used once, so the clip covers the
        // same channels as a chirp over the same range.
        const int seg = std::min(segments - 1, static_cast<int>(u * segments));
        const bool low_first = arch.trajectory == Trajectory::LowHigh;
        const bool low = (seg % 2 == 0) == low_first;
        const int n_low = (segments + 1) / 2;
        const int level = low ? seg / 2 : n_low + seg / 2;
        const double pos = segments > 1 ? static_cast<double>(std::min(level, segments - 1)) /
                                              (segments - 1)
                                        : 0.0;
        f = f_lo * std::pow(f_hi / f_lo, pos);
        break;
      }
    }
    const double envelope =
        spec.amplitude * (1.0 - std::exp(-t / spec.attack)) * std::exp(-spec.decay * u);
    out[k] = envelope * std::sin(phase);
    phase += 2.0 * std::numbers::pi * f / fs;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
  }
  for (double& s : out) s = std::clamp(s + spec.noise_level * gauss(rng), -1.0, 1.0);
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_classes < 2) throw ConfigError("synthetic: n_classes must be >= 2");
  if (spec.clips_per_class < 2) throw ConfigError("synthetic: clips_per_class must be >= 2");
  if (spec.sample_rate <= 0) throw ConfigError("synthetic: sample_rate must be > 0");
  if (!(spec.min_duration > 0 && spec.max_duration >= spec.min_duration)) {
    throw ConfigError("synthetic: invalid duration range");
  }
  if (!(spec.noise_level >= 0)) throw ConfigError("synthetic: noise_level must be >= 0");
  const auto archetypes = spec.archetypes.empty() ? default_archetypes(spec.n_classes)
                                                  : spec.archetypes;
  if (archetypes.size() != static_cast<std::size_t>(spec.n_classes)) {
    throw ConfigError("synthetic: archetype count must equal n_classes");
  }
  for (const auto& a : archetypes) {
    if (!(a.f_low > 0 && a.f_high > a.f_low && a.f_high < spec.sample_rate / 2.0)) {
      throw ConfigError("synthetic: archetype '" + a.label + "' has invalid frequencies");
    }
  }

  SyntheticCorpus corpus;
  std::mt19937_64 rng(spec.seed);
  for (int i = 0; i < spec.clips_per_class; ++i) {
    for (const auto& arch : archetypes) {
      AudioClip clip;
      clip.sample_rate = spec.sample_rate;
      clip.id = arch.label + "_" + std::to_string(i);
      clip.samples = synthesize_clip(spec, arch, rng);
      corpus.manifest.entries.push_back({std::filesystem::path("wav") / (clip.id + ".wav"),
                                         arch.label, i % 2 == 0 ? Split::Train : Split::Test});
      corpus.clips.push_back(std::move(clip));
    }
  }
  return corpus;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < corpus.clips.size(); ++i) {
    const auto& clip = corpus.clips[i];
    write_wav_pcm16(dir / corpus.manifest.entries[i].path, clip.samples,
                    static_cast<int>(clip.sample_rate));
  }
  io::write_file_atomic(dir / "manifest.csv", manifest_to_csv(corpus.manifest));
}

// ---------------------------------------------------------------------------
// Experiments

std::string_view classifier_name(Classifier c) { return c == Classifier::Svm ? "svm" : "tempotron"; }

Classifier parse_classifier(std::string_view name) {
  if (name == "svm") return Classifier::Svm;
  if (name == "tempotron" || name == "snn") return Classifier::Tempotron;
  throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

SpectrogramSet analyze_corpus(std::span<const AudioClip> clips, const Manifest& manifest,
                              const FilterbankSpec& frontend, int jobs) {
  if (clips.size() != manifest.entries.size()) {
    throw ShapeError("analyze_corpus: clip count differs from manifest");
  }
  std::vector<Spectrogram> specs(clips.size());
  parallel_for(clips.size(), jobs, [&](std::size_t i) { specs[i] = analyze(clips[i], frontend); });
  SpectrogramSet out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.split == Split::Train) {
      out.train.push_back(std::move(specs[i]));
      out.train_labels.push_back(e.label);
    } else {
      out.test.push_back(std::move(specs[i]));
      out.test_labels.push_back(e.label);
    }
  }
  return out;
}

SpectrogramSet analyze_corpus(const Manifest& manifest, const FilterbankSpec& frontend, int jobs) {
  std::vector<AudioClip> clips(manifest.entries.size());
  parallel_for(clips.size(), jobs, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    try {
      clips[i] = read_wav(manifest.resolve(e));
    } catch (const Error& err) {
      throw IngestionError(manifest.resolve(e).string() + ": " + err.what());
    }
  });
  return analyze_corpus(clips, manifest, frontend, jobs);
}

std::vector<SpikePattern> encode_all(std::span<const Spectrogram> spectrograms,
                                     const EncoderConfig& cfg, int jobs) {
  std::vector<SpikePattern> out(spectrograms.size());
  parallel_for(spectrograms.size(), jobs,
               [&](std::size_t i) { out[i] = encode(spectrograms[i], cfg); });
  return out;
}

double accuracy_percent(std::span<const std::string> truth, std::span<const std::string> predicted) {
  if (truth.size() != predicted.size()) throw ShapeError("accuracy: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<std::vector<int>> confusion_matrix(std::span<const std::string> labels,
                                               std::span<const std::string> truth,
                                               std::span<const std::string> predicted) {
  if (truth.size() != predicted.size()) throw ShapeError("confusion: length mismatch");
  const auto index = [&](const std::string& l) {
    const auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ShapeError("confusion: unknown label '" + l + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  std::vector<std::vector<int>> m(labels.size(), std::vector<int>(labels.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++m[index(truth[i])][index(predicted[i])];
  return m;
}

ExperimentResult run_experiment(const SpectrogramSet& data, const ExperimentConfig& cfg) {
  if (data.train.empty() || data.test.empty()) {
    throw ConfigError("run_experiment: both train and test splits must be non-empty");
  }
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.scheme = cfg.encoder.scheme();
  result.classifier = cfg.classifier;

  const auto train_patterns = encode_all(data.train, cfg.encoder, cfg.jobs);
  const auto test_patterns = encode_all(data.test, cfg.encoder, cfg.jobs);
  std::vector<std::string> train_pred, test_pred;

  if (cfg.classifier == Classifier::Svm) {
    result.vectorizer = cfg.vectorizer;
    VectorizerConfig vc;
    vc.scheme = cfg.vectorizer;
    vc.mean_duration = mean_duration(train_patterns);
    vc.n_time_bins = cfg.n_time_bins.value_or(
        default_time_bins(train_patterns, data.train.front().frame_stride));
    vc.window = cfg.v2_by_window ? data.train.front().frame_stride : 0.0;
    const auto vectorize_all = [&](const std::vector<SpikePattern>& ps) {
      std::vector<FeatureVector> out(ps.size());
      parallel_for(ps.size(), cfg.jobs, [&](std::size_t i) { out[i] = vectorize(ps[i], vc); });
      return out;
    };
    const auto train_x = vectorize_all(train_patterns);
    const auto test_x = vectorize_all(test_patterns);
    auto model = train_ova_svm(train_x, data.train_labels, cfg.svm);
    model.train_meta.mean_duration = vc.mean_duration;
    model.train_meta.n_time_bins = vc.scheme == VectorScheme::V2 ? vc.n_time_bins : 0;
    result.feature_length = model.dim;
    result.metrics.class_labels = model.class_labels;
    for (const auto& x : train_x) train_pred.push_back(predict(model, x));
    for (const auto& x : test_x) test_pred.push_back(predict(model, x));
    result.svm_model = std::move(model);
  } else {
    const auto model = fit_tempotron(train_patterns, data.train_labels, cfg.tempotron, cfg.seed);
    result.feature_length = model.n_afferents;
    result.metrics.class_labels = model.class_labels;
    train_pred.resize(train_patterns.size());
    test_pred.resize(test_patterns.size());
    parallel_for(train_patterns.size(), cfg.jobs,
                 [&](std::size_t i) { train_pred[i] = classify(model, train_patterns[i]); });
    parallel_for(test_patterns.size(), cfg.jobs,
                 [&](std::size_t i) { test_pred[i] = classify(model, test_patterns[i]); });
    result.tempotron_model = model;
  }

  result.metrics.train_accuracy = accuracy_percent(data.train_labels, train_pred);
  result.metrics.test_accuracy = accuracy_percent(data.test_labels, test_pred);
  result.metrics.confusion =
      confusion_matrix(result.metrics.class_labels, data.test_labels, test_pred);
  result.metrics.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ExperimentResult run_experiment(const Manifest& manifest, const ExperimentConfig& cfg) {
  return run_experiment(analyze_corpus(manifest, cfg.frontend, cfg.jobs), cfg);
}

// ---------------------------------------------------------------------------
// Statistics and reports

SpikeStats spike_rate_stats(std::span<const SpikePattern> patterns) {
  SpikeStats s;
  if (patterns.empty()) return s;
  s.scheme = patterns.front().scheme;
  s.n_neurons = patterns.front().n_neurons();
  double spikes = 0.0, seconds = 0.0;
  for (const auto& p : patterns) {
    if (p.scheme != s.scheme || p.n_neurons() != s.n_neurons) {
      throw ShapeError("spike_rate_stats: patterns must share scheme and neuron count");
    }
    spikes += static_cast<double>(p.total_spikes());
    seconds += p.duration;
  }
  s.total_rate = seconds > 0 ? spikes / seconds : 0.0;
  s.per_neuron_rate = s.n_neurons > 0 ? s.total_rate / s.n_neurons : 0.0;
  return s;
}

double round1(double percent) { return std::round(percent * 10.0) / 10.0; }

std::string report_json(std::span<const ExperimentResult> results,
                        std::span<const SpikeStats> stats, std::string_view config_json) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["config"] = config_json.empty() ? ordered_json::object() : ordered_json::parse(config_json);
  // Worker count never changes results, so it stays out of the report.
  doc["config"].erase("jobs");
  doc["metrics"] = ordered_json::array();
  for (const auto& r : results) {
    ordered_json m;
    m["scheme"] = scheme_name(r.scheme);
    m["classifier"] = classifier_name(r.classifier);
    m["vectorizer"] = r.vectorizer ? ordered_json(vector_scheme_name(*r.vectorizer)) : ordered_json();
    m["feature_length"] = r.feature_length;
    m["train_accuracy"] = round1(r.metrics.train_accuracy);
    m["test_accuracy"] = round1(r.metrics.test_accuracy);
    m["class_labels"] = r.metrics.class_labels;
    m["confusion"] = r.metrics.confusion;
    doc["metrics"].push_back(std::move(m));
  }
  doc["stats"] = ordered_json::array();
  for (const auto& s : stats) {
    ordered_json j;
    j["scheme"] = scheme_name(s.scheme);
    j["n_neurons"] = s.n_neurons;
    j["total_rate"] = s.total_rate;
    j["per_neuron_rate"] = s.per_neuron_rate;
    doc["stats"].push_back(std::move(j));
  }
  doc["versions"] = {{"spikecode", kVersion}, {"report_format", 1}};
  return doc.dump(2) + "\n";
}

namespace {

std::string pct(double v) { return io::format_double("%.1f", round1(v)); }

}  // namespace

std::string accuracy_csv(std::span<const ExperimentResult> results) {
  struct Row {
    const ExperimentResult* v1 = nullptr;
    const ExperimentResult* v2 = nullptr;
  };
  std::vector<Scheme> order;
  std::map<Scheme, Row> rows;
  for (const auto& r : results) {
    if (r.classifier != Classifier::Svm || !r.vectorizer) continue;
    if (!rows.contains(r.scheme)) order.push_back(r.scheme);
    auto& row = rows[r.scheme];
    (*r.vectorizer == VectorScheme::V1 ? row.v1 : row.v2) = &r;
  }
  std::string out = "scheme,vector_length_v1,train_v1,test_v1,vector_length_v2,train_v2,test_v2\n";
  const auto cells = [](const ExperimentResult* r) {
    if (r == nullptr) return std::string(",,");
    return std::to_string(r->feature_length) + "," + pct(r->metrics.train_accuracy) + "," +
           pct(r->metrics.test_accuracy);
  };
  for (Scheme s : order) {
    out += std::string(scheme_name(s)) + "," + cells(rows[s].v1) + "," + cells(rows[s].v2) + "\n";
  }
  return out;
}

std::string snn_accuracy_csv(std::span<const ExperimentResult> results) {
  std::string out = "scheme,n_afferents,train,test\n";
  for (const auto& r : results) {
    if (r.classifier != Classifier::Tempotron) continue;
    out += std::string(scheme_name(r.scheme)) + "," + std::to_string(r.feature_length) + "," +
           pct(r.metrics.train_accuracy) + "," + pct(r.metrics.test_accuracy) + "\n";
  }
  return out;
}

void export_report(std::span<const ExperimentResult> results, std::span<const SpikeStats> stats,
                   std::string_view config_json, const std::filesystem::path& dir) {
  io::write_file_atomic(dir / "report.json", report_json(results, stats, config_json));
  io::write_file_atomic(dir / "accuracy.csv", accuracy_csv(results));
  io::write_file_atomic(dir / "snn_accuracy.csv", snn_accuracy_csv(results));
}

}  // namespace spikecode
