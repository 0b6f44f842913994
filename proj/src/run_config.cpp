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

#include "spikecode/run_config.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <type_traits>

#include "json.hpp"
#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(describe("") + " must be an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void real(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(describe(key) + " must be a number");
      out = v->get<double>();
    }
  }
  void real(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) throw ConfigError(describe(key) + " must be a number or null");
      out = v->get<double>();
    }
  }
  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) out = as_integer<Int>(*v, key);
  }
  void integer(const std::string& key, std::optional<int>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      out = as_integer<int>(*v, key);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(describe(key) + " must be true or false");
      out = v->get<bool>();
    }
  }
  template <typename T, typename Parse>
  void names(const std::string& key, std::vector<T>& out, Parse parse) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->empty()) {
        throw ConfigError(describe(key) + " must be a non-empty list of names");
      }
      out.clear();
      for (const auto& item : *v) {
        if (!item.is_string()) throw ConfigError(describe(key) + " entries must be strings");
        try {
          out.push_back(parse(item.get<std::string>()));
        } catch (const ConfigError& e) {
          throw ConfigError(describe(key) + ": " + e.what());
        }
      }
    }
  }

  /// Throws for the first key that was never asked for.
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      if (!seen_.contains(key)) throw ConfigError("unknown config key '" + describe(key) + "'");
    }
  }

  std::string describe(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  template <typename Int>
  Int as_integer(const json& v, const std::string& key) const {
    if (v.is_number_integer()) {
      if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
        if (v.get<long long>() < 0) throw ConfigError(describe(key) + " must be >= 0");
      }
      return static_cast<Int>(v.get<long long>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<Int>(d);
    }
    throw ConfigError(describe(key) + " must be an integer");
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void optional_section(Section& parent, const std::string& key,
                      const std::function<void(Section&)>& body) {
  if (const json* v = parent.find(key)) {
    Section s(*v, parent.describe(key));
    body(s);
    s.finish();
  }
}

}  // namespace

EncoderConfig RunConfig::encoder(Scheme scheme) const {
  LatencyConfig lat;
  lat.rate_r = 1.0 / frontend.frame_stride;
  lat.min_intensity_eps = min_intensity_eps;
  PhaseConfig ph;
  ph.base = lat;
  ph.smo_freq = smo_freq;
  ph.phase_step = phase_step;
  PopulationConfig pop;
  pop.phase = ph;
  pop.n_fields = n_fields;
  pop.sigma = sigma;
  pop.min_response_gamma = min_response_gamma;
  pop.resnap = resnap;
  switch (scheme) {
    case Scheme::Latency: return EncoderConfig::latency(lat);
    case Scheme::Phase: return EncoderConfig::phase(ph);
    case Scheme::PopLatency: pop.base_scheme = Scheme::Latency; return EncoderConfig::population(pop);
    case Scheme::PopPhase: pop.base_scheme = Scheme::Phase; return EncoderConfig::population(pop);
    case Scheme::Threshold: return EncoderConfig::threshold(ThresholdConfig{thresholds});
  }
  throw ConfigError("unknown scheme");
}

ExperimentConfig RunConfig::experiment(Scheme scheme, VectorScheme vectorizer,
                                       Classifier classifier) const {
  ExperimentConfig e;
  e.frontend = frontend;
  e.encoder = encoder(scheme);
  e.vectorizer = vectorizer;
  e.n_time_bins = n_time_bins;
  e.v2_by_window = v2_by_window;
  e.classifier = classifier;
  e.svm = svm;
  e.svm.seed = seed;
  e.tempotron = tempotron;
  e.seed = seed;
  e.jobs = jobs;
  return e;
}

SyntheticSpec RunConfig::synthetic_spec() const {
  SyntheticSpec s = synthetic;
  s.seed = seed;
  return s;
}

void RunConfig::validate() const {
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  // The sample rate is only known per clip; check everything else here.
  validate_filterbank(frontend, 1e9);
  for (Scheme s : schemes) {
    const auto enc = encoder(s);
    std::visit([](const auto& c) { spikecode::validate(c); }, enc.params);
  }
  if (n_time_bins && *n_time_bins < 1) throw ConfigError("vectorizer.n_time_bins must be >= 1");
  if (!(svm.lambda > 0)) throw ConfigError("svm.lambda must be > 0");
  if (svm.epochs < 1) throw ConfigError("svm.epochs must be >= 1");
  if (!(svm.tolerance > 0)) throw ConfigError("svm.tolerance must be > 0");
  if (svm.max_passes < 1) throw ConfigError("svm.max_passes must be >= 1");
  if (!(tempotron.tau_m > tempotron.tau_s && tempotron.tau_s > 0)) {
    throw ConfigError("tempotron: need tau_m > tau_s > 0");
  }
  if (!(tempotron.learn_rate > 0)) throw ConfigError("tempotron.learn_rate must be > 0");
  if (!(tempotron.grid_step > 0)) throw ConfigError("tempotron.grid_step must be > 0");
  if (!(tempotron.init_max_weight >= 0)) throw ConfigError("tempotron.init_max_weight must be >= 0");
  if (tempotron.epochs < 1) throw ConfigError("tempotron.epochs must be >= 1");
  if (schemes.empty() || vectorizers.empty() || classifiers.empty()) {
    throw ConfigError("schemes, vectorizers and classifiers must be non-empty");
  }
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section root(doc, "");
  root.integer("seed", cfg.seed);
  root.integer("jobs", cfg.jobs);

  optional_section(root, "frontend", [&](Section& s) {
    s.integer("n_channels", cfg.frontend.n_channels);
    s.real("f_low", cfg.frontend.f_low);
    s.real("f_high", cfg.frontend.f_high);
    s.real("q_factor", cfg.frontend.q_factor);
    s.real("frame_length", cfg.frontend.frame_length);
    s.real("frame_stride", cfg.frontend.frame_stride);
  });

  optional_section(root, "encoder", [&](Section& s) {
    s.names("schemes", cfg.schemes, [](const std::string& n) { return parse_scheme(n); });
    s.real("min_intensity_eps", cfg.min_intensity_eps);
    s.real("smo_freq", cfg.smo_freq);
    s.real("phase_step", cfg.phase_step);
    s.integer("n_fields", cfg.n_fields);
    s.real("sigma", cfg.sigma);
    s.real("min_response_gamma", cfg.min_response_gamma);
    s.boolean("resnap", cfg.resnap);
    if (const json* v = s.find("thresholds")) {
      if (v->is_number_integer()) {
        const auto k = v->get<long long>();
        if (k < 1 || k > 100000) throw ConfigError("encoder.thresholds must be >= 1");
        cfg.thresholds = ThresholdConfig::default_thresholds(static_cast<int>(k));
      } else if (v->is_array()) {
        cfg.thresholds.clear();
        for (const auto& x : *v) {
          if (!x.is_number()) throw ConfigError("encoder.thresholds entries must be numbers");
          cfg.thresholds.push_back(x.get<double>());
        }
      } else {
        throw ConfigError("encoder.thresholds must be an integer or a list of numbers");
      }
    }
  });

  optional_section(root, "vectorizer", [&](Section& s) {
    s.names("vectorizers", cfg.vectorizers,
            [](const std::string& n) { return parse_vector_scheme(n); });
    s.integer("n_time_bins", cfg.n_time_bins);
    s.boolean("by_window", cfg.v2_by_window);
  });

  if (const json* v = root.find("classifiers")) {
    const json wrapped = json::object({{"classifiers", *v}});
    Section wrapper(wrapped, "");
    wrapper.names("classifiers", cfg.classifiers,
                  [](const std::string& n) { return parse_classifier(n); });
  }

  optional_section(root, "svm", [&](Section& s) {
    s.real("lambda", cfg.svm.lambda);
    s.integer("epochs", cfg.svm.epochs);
    s.real("tolerance", cfg.svm.tolerance);
    s.integer("max_passes", cfg.svm.max_passes);
    if (const json* v = s.find("solver")) {
      if (!v->is_string()) throw ConfigError("svm.solver must be a string");
      cfg.svm.solver = parse_svm_solver(v->get<std::string>());
    }
  });

  optional_section(root, "tempotron", [&](Section& s) {
    s.real("tau_m", cfg.tempotron.tau_m);
    s.real("tau_s", cfg.tempotron.tau_s);
    s.real("learn_rate", cfg.tempotron.learn_rate);
    s.real("grid_step", cfg.tempotron.grid_step);
    s.real("init_max_weight", cfg.tempotron.init_max_weight);
    s.integer("epochs", cfg.tempotron.epochs);
  });

  optional_section(root, "synthetic", [&](Section& s) {
    auto& y = cfg.synthetic;
    s.integer("n_classes", y.n_classes);
    s.integer("clips_per_class", y.clips_per_class);
    s.integer("sample_rate", y.sample_rate);
    s.real("min_duration", y.min_duration);
    s.real("max_duration", y.max_duration);
    s.real("noise_level", y.noise_level);
    s.real("freq_jitter", y.freq_jitter);
    s.real("amplitude", y.amplitude);
    s.real("attack", y.attack);
    s.real("decay", y.decay);
    s.integer("alternation_segments", y.alternation_segments);
  });

  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text);
}

std::string run_config_to_json(const RunConfig& cfg) {
  const auto names = [](const auto& items, auto name_of) {
    ordered_json a = ordered_json::array();
    for (const auto& x : items) a.push_back(std::string(name_of(x)));
    return a;
  };
  ordered_json j;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["frontend"] = {
      {"n_channels", cfg.frontend.n_channels},
      {"f_low", cfg.frontend.f_low},
      {"f_high", cfg.frontend.f_high ? ordered_json(*cfg.frontend.f_high) : ordered_json()},
      {"q_factor", cfg.frontend.q_factor},
      {"frame_length", cfg.frontend.frame_length},
      {"frame_stride", cfg.frontend.frame_stride},
  };
  j["encoder"] = {
      {"schemes", names(cfg.schemes, scheme_name)},
      {"min_intensity_eps", cfg.min_intensity_eps},
      {"smo_freq", cfg.smo_freq},
      {"phase_step", cfg.phase_step},
      {"n_fields", cfg.n_fields},
      {"sigma", cfg.sigma ? ordered_json(*cfg.sigma) : ordered_json()},
      {"min_response_gamma", cfg.min_response_gamma},
      {"resnap", cfg.resnap},
      {"thresholds", cfg.thresholds},
  };
  j["vectorizer"] = {
      {"vectorizers", names(cfg.vectorizers, vector_scheme_name)},
      {"n_time_bins", cfg.n_time_bins ? ordered_json(*cfg.n_time_bins) : ordered_json()},
      {"by_window", cfg.v2_by_window},
  };
  j["classifiers"] = names(cfg.classifiers, classifier_name);
  j["svm"] = {
      {"lambda", cfg.svm.lambda},
      {"epochs", cfg.svm.epochs},
      {"tolerance", cfg.svm.tolerance},
      {"max_passes", cfg.svm.max_passes},
      {"solver", std::string(svm_solver_name(cfg.svm.solver))},
  };
  j["tempotron"] = {
      {"tau_m", cfg.tempotron.tau_m},
      {"tau_s", cfg.tempotron.tau_s},
      {"learn_rate", cfg.tempotron.learn_rate},
      {"grid_step", cfg.tempotron.grid_step},
      {"init_max_weight", cfg.tempotron.init_max_weight},
      {"epochs", cfg.tempotron.epochs},
  };
  const auto& y = cfg.synthetic;
  j["synthetic"] = {
      {"n_classes", y.n_classes},
      {"clips_per_class", y.clips_per_class},
      {"sample_rate", y.sample_rate},
      {"min_duration", y.min_duration},
      {"max_duration", y.max_duration},
      {"noise_level", y.noise_level},
      {"freq_jitter", y.freq_jitter},
      {"amplitude", y.amplitude},
      {"attack", y.attack},
      {"decay", y.decay},
      {"alternation_segments", y.alternation_segments},
  };
  return j.dump(2) + "\n";
}

}  // namespace spikecode
