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

// Python bindings. Configuration crosses the boundary as RunConfig JSON so the
// Python side sees the same keys as the CLI.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "spikecode/audio.hpp"
#include "spikecode/encoders.hpp"
#include "spikecode/error.hpp"
#include "spikecode/frontend.hpp"
#include "spikecode/harness.hpp"
#include "spikecode/run_config.hpp"
#include "spikecode/spike_pattern.hpp"
#include "spikecode/svm.hpp"
#include "spikecode/tempotron.hpp"
#include "spikecode/vectorizers.hpp"

namespace py = pybind11;
using namespace spikecode;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

RunConfig config_from(const std::string& json) {
  return json.empty() ? RunConfig{} : parse_run_config(json);
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw ShapeError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

Array spectrogram_array(const Spectrogram& s) {
  Array out({s.n_channels, s.n_frames});
  std::copy(s.values.begin(), s.values.end(), out.mutable_data());
  return out;
}

Spectrogram spectrogram_from(const Array& a, double frame_stride) {
  if (a.ndim() != 2) throw ShapeError("spectrogram must be 2-D (channels x frames)");
  Spectrogram s;
  s.n_channels = static_cast<int>(a.shape(0));
  s.n_frames = static_cast<int>(a.shape(1));
  s.frame_stride = frame_stride;
  s.values.assign(a.data(), a.data() + a.size());
  return s;
}

std::vector<FeatureVector> rows_of(const Array& x) {
  if (x.ndim() != 2) throw ShapeError("feature matrix must be 2-D (samples x features)");
  std::vector<FeatureVector> out(static_cast<std::size_t>(x.shape(0)));
  const auto dim = x.shape(1);
  for (py::ssize_t i = 0; i < x.shape(0); ++i) {
    out[static_cast<std::size_t>(i)].values.assign(x.data() + i * dim, x.data() + (i + 1) * dim);
  }
  return out;
}

py::dict metrics_dict(const ExperimentResult& r) {
  py::dict d;
  d["scheme"] = std::string(scheme_name(r.scheme));
  d["vectorizer"] = r.vectorizer ? py::cast(std::string(vector_scheme_name(*r.vectorizer)))
                                 : py::none();
  d["classifier"] = std::string(classifier_name(r.classifier));
  d["feature_length"] = r.feature_length;
  d["train_accuracy"] = r.metrics.train_accuracy;
  d["test_accuracy"] = r.metrics.test_accuracy;
  d["class_labels"] = r.metrics.class_labels;
  d["confusion"] = r.metrics.confusion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spike encodings of audio spectrograms and their classifiers.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", base.ptr());
  py::register_exception<EncodingError>(m, "EncodingError", base.ptr());
  py::register_exception<VectorizationError>(m, "VectorizationError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("schemes", [] {
    std::vector<std::string> out;
    for (Scheme s : kAllSchemes) out.emplace_back(scheme_name(s));
    return out;
  });
  m.def("default_config", [] { return run_config_to_json(RunConfig{}); },
        "Default run configuration as JSON.");

  // Audio and frontend.
  m.def(
      "read_wav",
      [](const std::filesystem::path& path) {
        const auto clip = read_wav(path);
        return py::make_tuple(to_array(clip.samples), clip.sample_rate);
      },
      py::arg("path"), "Returns (mono samples in [-1, 1], sample_rate).");
  m.def(
      "write_wav",
      [](const std::filesystem::path& path, const Array& samples, int sample_rate) {
        write_wav_pcm16(path, to_vector(samples), sample_rate);
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate"));
  m.def(
      "analyze",
      [](const Array& samples, double sample_rate, const std::string& config) {
        AudioClip clip{to_vector(samples), sample_rate, {}};
        return spectrogram_array(analyze(clip, config_from(config).frontend));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("config") = "",
      "Normalized log-energy spectrogram, shape (channels, frames).");

  // Spike patterns.
  py::class_<SpikePattern>(m, "SpikePattern")
      .def_property_readonly("n_neurons", &SpikePattern::n_neurons)
      .def_property_readonly("duration", [](const SpikePattern& p) { return p.duration; })
      .def_property_readonly("scheme", [](const SpikePattern& p) { return std::string(scheme_name(p.scheme)); })
      .def_property_readonly("total_spikes", &SpikePattern::total_spikes)
      .def("times", [](const SpikePattern& p, int n) {
        if (n < 0 || n >= p.n_neurons()) throw py::index_error("neuron out of range");
        return to_array(p.times(n));
      })
      .def("to_csv", &pattern_to_csv)
      .def("metadata", &pattern_metadata)
      .def_static("from_text", &pattern_from_text, py::arg("csv"), py::arg("metadata"))
      .def("__repr__", [](const SpikePattern& p) {
        return "<SpikePattern " + std::string(scheme_name(p.scheme)) + " neurons=" +
               std::to_string(p.n_neurons()) + " spikes=" + std::to_string(p.total_spikes()) + ">";
      });

  m.def(
      "encode",
      [](const Array& spectrogram, const std::string& scheme, const std::string& config,
         double frame_stride) {
        const auto cfg = config_from(config);
        return encode(spectrogram_from(spectrogram, frame_stride), cfg.encoder(parse_scheme(scheme)));
      },
      py::arg("spectrogram"), py::arg("scheme"), py::arg("config") = "",
      py::arg("frame_stride") = 0.010);
  m.def(
      "encode_latency",
      [](const Array& row, double rate, double eps) {
        return to_array(encode_latency(to_vector(row), LatencyConfig{rate, eps}, 0).times);
      },
      py::arg("row"), py::arg("rate") = 100.0, py::arg("min_intensity") = 0.01);
  m.def("smo_nearest_peak", &smo_nearest_peak, py::arg("t"), py::arg("smo_freq"),
        py::arg("phase"));
  m.def("receptive_field_response", &receptive_field_response, py::arg("t"), py::arg("mu"),
        py::arg("sigma"));

  // Vectorizers.
  m.def(
      "vectorize",
      [](const SpikePattern& p, const std::string& scheme, double mean_duration, int n_time_bins,
         double window) {
        VectorizerConfig cfg;
        cfg.scheme = parse_vector_scheme(scheme);
        cfg.mean_duration = mean_duration;
        cfg.n_time_bins = n_time_bins;
        cfg.window = window;
        return to_array(vectorize(p, cfg).values);
      },
      py::arg("pattern"), py::arg("scheme") = "v1", py::arg("mean_duration") = 0.0,
      py::arg("n_time_bins") = 0, py::arg("window") = 0.010);

  // SVM.
  py::class_<LinearModel>(m, "LinearModel")
      .def_property_readonly("class_labels", [](const LinearModel& mdl) { return mdl.class_labels; })
      .def_property_readonly("weights", [](const LinearModel& mdl) {
        Array w({mdl.n_classes, mdl.dim});
        std::copy(mdl.weights.begin(), mdl.weights.end(), w.mutable_data());
        return w;
      })
      .def_property_readonly("biases", [](const LinearModel& mdl) { return to_array(mdl.biases); })
      .def("decision_values", [](const LinearModel& mdl, const Array& x) {
        return to_array(decision_values(mdl, to_vector(x)));
      })
      .def("predict", [](const LinearModel& mdl, const Array& x) {
        std::vector<std::string> out;
        for (const auto& row : rows_of(x)) out.push_back(predict(mdl, row));
        return out;
      })
      .def("to_text", &linear_model_to_text)
      .def_static("from_text", &linear_model_from_text);
  m.def(
      "train_svm",
      [](const Array& x, const std::vector<std::string>& labels, double lambda,
         const std::string& solver, std::uint64_t seed) {
        SvmOptions o;
        o.lambda = lambda;
        o.seed = seed;
        if (solver == "pegasos") o.solver = SvmSolver::Pegasos;
        else if (solver != "dual_cd") throw ConfigError("solver must be 'dual_cd' or 'pegasos'");
        const auto xs = rows_of(x);
        py::gil_scoped_release release;
        return train_ova_svm(xs, labels, o);
      },
      py::arg("x"), py::arg("labels"), py::arg("lam") = 1e-4, py::arg("solver") = "dual_cd",
      py::arg("seed") = 42);

  // Tempotron.
  m.def("psp_kernel", [](double dt, double tau_m, double tau_s) {
    return psp_kernel(dt, tau_m, tau_s, kernel_norm(tau_m, tau_s));
  }, py::arg("dt"), py::arg("tau_m") = 0.020, py::arg("tau_s") = 0.005);
  py::class_<TempotronModel>(m, "TempotronModel")
      .def_property_readonly("class_labels", [](const TempotronModel& t) { return t.class_labels; })
      .def_property_readonly("n_afferents", [](const TempotronModel& t) { return t.n_afferents; })
      .def("classify", &classify, py::arg("pattern"))
      .def("peaks", &class_peaks, py::arg("pattern"))
      .def("to_text", &tempotron_model_to_text)
      .def_static("from_text", &tempotron_model_from_text);
  m.def(
      "train_tempotron",
      [](const std::vector<SpikePattern>& patterns, const std::vector<std::string>& labels,
         int epochs, double learn_rate, std::uint64_t seed) {
        TempotronParams p;
        p.epochs = epochs;
        p.learn_rate = learn_rate;
        py::gil_scoped_release release;
        return fit_tempotron(patterns, labels, p, seed);
      },
      py::arg("patterns"), py::arg("labels"), py::arg("epochs") = 200,
      py::arg("learn_rate") = 1e-3, py::arg("seed") = 42);

  // Harness.
  m.def(
      "generate_synthetic",
      [](const std::filesystem::path& dir, const std::string& config) {
        write_synthetic(generate_synthetic(config_from(config).synthetic_spec()), dir);
        return dir / "manifest.csv";
      },
      py::arg("dir"), py::arg("config") = "", "Writes wav/*.wav and manifest.csv; returns the manifest path.");
  m.def(
      "run_experiment",
      [](const std::filesystem::path& manifest, const std::string& scheme,
         const std::string& vectorizer, const std::string& classifier, const std::string& config) {
        const auto cfg = config_from(config);
        const auto exp = cfg.experiment(parse_scheme(scheme), parse_vector_scheme(vectorizer),
                                        parse_classifier(classifier));
        const auto man = load_manifest(manifest);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(man, exp);
        }
        return metrics_dict(r);
      },
      py::arg("manifest"), py::arg("scheme") = "latency", py::arg("vectorizer") = "v1",
      py::arg("classifier") = "svm", py::arg("config") = "");
}
