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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spikecode/audio.hpp"
#include "spikecode/error.hpp"
#include "spikecode/harness.hpp"
#include "spikecode/io.hpp"
#include "spikecode/run_config.hpp"

namespace spikecode::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum class Format { Csv, Json };

// Options every subcommand accepts.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
  std::string format = "csv";

  void attach(CLI::App* app, bool out_required) {
    app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Seed for every random choice (overrides the config)");
    app->add_option("--jobs", jobs, "Worker threads for clip-level work")
        ->check(CLI::PositiveNumber);
    auto* o = app->add_option("--out", out, "Output directory");
    if (out_required) o->required();
    app->add_option("--format", format, "Console output format")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  // Config file first, then flags on top.
  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    cfg.validate();
    return cfg;
  }

  Format fmt() const { return format == "json" ? Format::Json : Format::Csv; }
};

std::string fixed(double v, int decimals) {
  const std::string fmt = "%." + std::to_string(decimals) + "f";
  return io::format_double(fmt.c_str(), v);
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  Common common;
  std::optional<int> n_classes, clips_per_class, sample_rate, segments;
  std::optional<double> min_duration, max_duration, noise, freq_jitter, decay;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  RunConfig cfg = a.common.resolve();
  auto& y = cfg.synthetic;
  if (a.n_classes) y.n_classes = *a.n_classes;
  if (a.clips_per_class) y.clips_per_class = *a.clips_per_class;
  if (a.sample_rate) y.sample_rate = *a.sample_rate;
  if (a.segments) y.alternation_segments = *a.segments;
  if (a.min_duration) y.min_duration = *a.min_duration;
  if (a.max_duration) y.max_duration = *a.max_duration;
  if (a.noise) y.noise_level = *a.noise;
  if (a.freq_jitter) y.freq_jitter = *a.freq_jitter;
  if (a.decay) y.decay = *a.decay;

  const auto corpus = generate_synthetic(cfg.synthetic_spec());
  const fs::path dir(a.common.out);
  write_synthetic(corpus, dir);

  std::size_t n_train = 0;
  for (const auto& e : corpus.manifest.entries) n_train += e.split == Split::Train ? 1 : 0;
  const std::size_t n_test = corpus.manifest.entries.size() - n_train;
  const std::string manifest = (dir / "manifest.csv").string();
  if (a.common.fmt() == Format::Json) {
    ordered_json j{{"clips", corpus.clips.size()}, {"train", n_train}, {"test", n_test},
                   {"manifest", manifest}};
    out << j.dump() << "\n";
  } else {
    out << "clips,train,test,manifest\n"
        << corpus.clips.size() << "," << n_train << "," << n_test << "," << manifest << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeArgs {
  Common common;
  std::string input;
  std::string scheme = "latency";
};

bool looks_like_wav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav" || ext == ".wave";
}

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const Scheme scheme = parse_scheme(a.scheme);
  const EncoderConfig enc = cfg.encoder(scheme);

  std::vector<fs::path> inputs;
  const fs::path in(a.input);
  if (looks_like_wav(in)) {
    inputs.push_back(in);
  } else {
    const Manifest m = load_manifest(in);
    for (const auto& e : m.entries) inputs.push_back(m.resolve(e));
  }
  std::set<std::string> stems;
  for (const auto& p : inputs) {
    if (!stems.insert(p.stem().string()).second) {
      throw ConfigError("two inputs share the file name '" + p.stem().string() +
                        "'; output names would collide");
    }
  }

  std::vector<SpikePattern> patterns(inputs.size());
  parallel_for(inputs.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const AudioClip clip = read_wav(inputs[i]);
      patterns[i] = encode(analyze(clip, cfg.frontend), enc);
    } catch (const ConfigError& e) {
      throw ConfigError("clip '" + inputs[i].string() + "': " + e.what());
    } catch (const Error& e) {
      throw Error("clip '" + inputs[i].string() + "': " + e.what());
    }
  });
  const fs::path dir(a.common.out);
  for (const auto& p : patterns) save_pattern(p, dir, p.clip_id);

  if (a.common.fmt() == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : patterns) {
      rows.push_back({{"clip_id", p.clip_id}, {"scheme", scheme_name(p.scheme)},
                      {"n_neurons", p.n_neurons()}, {"spikes", p.total_spikes()},
                      {"duration", p.duration}});
    }
    out << rows.dump() << "\n";
  } else {
    out << "clip_id,scheme,n_neurons,spikes,duration\n";
    for (const auto& p : patterns) {
      out << p.clip_id << "," << scheme_name(p.scheme) << "," << p.n_neurons() << ","
          << p.total_spikes() << "," << io::exact(p.duration) << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  Common common;
  std::string manifest;
  std::vector<std::string> schemes, vectorizers, classifiers;
  std::optional<int> n_time_bins;
};

std::string model_stem(const ExperimentResult& r) {
  std::string s(scheme_name(r.scheme));
  if (r.vectorizer) s += "_" + std::string(vector_scheme_name(*r.vectorizer));
  return s + "_" + std::string(classifier_name(r.classifier));
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  RunConfig cfg = a.common.resolve();
  if (!a.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : a.schemes) cfg.schemes.push_back(parse_scheme(s));
  }
  if (!a.vectorizers.empty()) {
    cfg.vectorizers.clear();
    for (const auto& v : a.vectorizers) cfg.vectorizers.push_back(parse_vector_scheme(v));
  }
  if (!a.classifiers.empty()) {
    cfg.classifiers.clear();
    for (const auto& c : a.classifiers) cfg.classifiers.push_back(parse_classifier(c));
  }
  if (a.n_time_bins) cfg.n_time_bins = *a.n_time_bins;
  cfg.validate();

  const Manifest manifest = load_manifest(a.manifest);
  const SpectrogramSet data = analyze_corpus(manifest, cfg.frontend, cfg.jobs);
  if (data.train.empty() || data.test.empty()) {
    throw ConfigError("manifest needs at least one train and one test clip");
  }

  std::vector<ExperimentResult> results;
  std::vector<SpikeStats> stats;
  for (Scheme scheme : cfg.schemes) {
    std::vector<SpikePattern> all = encode_all(data.train, cfg.encoder(scheme), cfg.jobs);
    auto test = encode_all(data.test, cfg.encoder(scheme), cfg.jobs);
    all.insert(all.end(), std::make_move_iterator(test.begin()), std::make_move_iterator(test.end()));
    stats.push_back(spike_rate_stats(all));
    for (Classifier c : cfg.classifiers) {
      if (c == Classifier::Svm) {
        for (VectorScheme v : cfg.vectorizers) {
          results.push_back(run_experiment(data, cfg.experiment(scheme, v, c)));
        }
      } else {
        results.push_back(run_experiment(data, cfg.experiment(scheme, VectorScheme::V1, c)));
      }
    }
  }

  const fs::path dir(a.common.out);
  export_report(results, stats, run_config_to_json(cfg), dir);
  for (const auto& r : results) {
    const fs::path path = dir / "models" / (model_stem(r) + ".model");
    if (r.svm_model) save_linear_model(*r.svm_model, path);
    if (r.tempotron_model) save_tempotron_model(*r.tempotron_model, path);
  }

  if (a.common.fmt() == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : results) {
      rows.push_back({{"scheme", scheme_name(r.scheme)},
                      {"vectorizer", r.vectorizer ? ordered_json(vector_scheme_name(*r.vectorizer))
                                                  : ordered_json()},
                      {"classifier", classifier_name(r.classifier)},
                      {"feature_length", r.feature_length},
                      {"train_accuracy", round1(r.metrics.train_accuracy)},
                      {"test_accuracy", round1(r.metrics.test_accuracy)},
                      {"wall_time", r.metrics.wall_time}});
    }
    out << rows.dump() << "\n";
  } else {
    out << "scheme,vectorizer,classifier,feature_length,train,test,wall_time_s\n";
    for (const auto& r : results) {
      out << scheme_name(r.scheme) << ","
          << (r.vectorizer ? std::string(vector_scheme_name(*r.vectorizer)) : std::string()) << ","
          << classifier_name(r.classifier) << "," << r.feature_length << ","
          << fixed(round1(r.metrics.train_accuracy), 1) << ","
          << fixed(round1(r.metrics.test_accuracy), 1) << "," << fixed(r.metrics.wall_time, 3)
          << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  Common common;
  std::string dir;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  (void)a.common.resolve();  // validates --config even though no field is used
  const fs::path dir(a.dir);
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv" &&
        fs::exists(fs::path(entry.path()).replace_extension(".meta"))) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw Error("no spike patterns (<name>.csv + <name>.meta) in " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<SpikePattern> patterns;
  patterns.reserve(files.size());
  for (const auto& f : files) patterns.push_back(load_pattern(f));
  for (const auto& p : patterns) {
    if (p.scheme != patterns.front().scheme) {
      throw Error("patterns mix schemes (" + std::string(scheme_name(patterns.front().scheme)) +
                  ", " + std::string(scheme_name(p.scheme)) +
                  "); stats need a directory of one scheme");
    }
  }
  const SpikeStats s = spike_rate_stats(patterns);

  std::string text;
  if (a.common.fmt() == Format::Json) {
    ordered_json j{{"scheme", scheme_name(s.scheme)}, {"n_patterns", patterns.size()},
                   {"n_neurons", s.n_neurons}, {"total_rate", s.total_rate},
                   {"per_neuron_rate", s.per_neuron_rate}};
    text = j.dump() + "\n";
  } else {
    text = "scheme,n_patterns,n_neurons,total_rate,per_neuron_rate\n" +
           std::string(scheme_name(s.scheme)) + "," + std::to_string(patterns.size()) + "," +
           std::to_string(s.n_neurons) + "," + io::exact(s.total_rate) + "," +
           io::exact(s.per_neuron_rate) + "\n";
  }
  out << text;
  if (!a.common.out.empty()) {
    const std::string name = a.common.fmt() == Format::Json ? "stats.json" : "stats.csv";
    io::write_file_atomic(fs::path(a.common.out) / name, text);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spike encoding, vectorization and classification of audio clips", "spikecode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a synthetic labeled corpus (WAVs + manifest.csv)");
  synth.common.attach(s, true);
  s->add_option("--classes", synth.n_classes, "Number of classes");
  s->add_option("--clips-per-class", synth.clips_per_class, "Clips per class (half train, half test)");
  s->add_option("--sample-rate", synth.sample_rate, "Sample rate in Hz");
  s->add_option("--min-duration", synth.min_duration, "Shortest clip, seconds");
  s->add_option("--max-duration", synth.max_duration, "Longest clip, seconds");
  s->add_option("--noise", synth.noise, "White-noise standard deviation (full scale 1)");
  s->add_option("--freq-jitter", synth.freq_jitter, "Relative per-clip frequency jitter");
  s->add_option("--decay", synth.decay, "Envelope decay over the clip");
  s->add_option("--segments", synth.segments, "Tone levels in the alternation classes");

  EncodeArgs enc;
  auto* e = app.add_subcommand("encode", "Encode a WAV file or every clip of a manifest");
  enc.common.attach(e, true);
  e->add_option("input", enc.input, "WAV file or manifest CSV")->required()->check(CLI::ExistingFile);
  e->add_option("--scheme", enc.scheme, "latency, phase, pop_latency, pop_phase or threshold");

  RunArgs run_args;
  auto* r = app.add_subcommand("run", "Train and evaluate every configured combination");
  run_args.common.attach(r, true);
  r->add_option("manifest", run_args.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  r->add_option("--scheme", run_args.schemes, "Restrict to these schemes (repeatable)");
  r->add_option("--vectorizer", run_args.vectorizers, "Restrict to v1 and/or v2 (repeatable)");
  r->add_option("--classifier", run_args.classifiers, "Restrict to svm and/or tempotron (repeatable)");
  r->add_option("--time-bins", run_args.n_time_bins, "V2 time bins (default: mean train frames)");

  StatsArgs stats;
  auto* t = app.add_subcommand("stats", "Spike-rate statistics of a directory of encoded patterns");
  stats.common.attach(t, false);
  t->add_option("dir", stats.dir, "Directory written by `encode`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_synth(synth, out);
    if (*e) return cmd_encode(enc, out);
    if (*r) return cmd_run(run_args, out);
    if (*t) return cmd_stats(stats, out);
  } catch (const ConfigError& ce) {
    err << "spikecode: " << ce.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "spikecode: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace spikecode::cli
