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

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "spikecode/audio.hpp"
#include "spikecode/io.hpp"
#include "test_support.hpp"

using namespace spikecode;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spikecode");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_ext(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

// A tiny corpus on disk: 4 classes x `per_class` clips.
fs::path small_corpus(const testing::TempDir& dir, int per_class = 2, const std::string& seed = "42") {
  const auto root = dir / ("corpus" + seed);
  const auto r = run_cli({"synth", "--out", root.string(), "--clips-per-class",
                          std::to_string(per_class), "--seed", seed});
  REQUIRE(r.code == cli::kExitOk);
  return root;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"synth"}).code == cli::kExitUsage);  // --out is required
  CHECK(run_cli({"run", "/nonexistent/manifest.csv", "--out", "/tmp/x"}).code == cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("synth defaults write 160 WAVs and a manifest") {
  testing::TempDir dir;
  const auto r = run_cli({"synth", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  CHECK(count_ext(dir / "wav", ".wav") == 160);
  CHECK(fs::exists(dir / "manifest.csv"));
  CHECK(r.out.find("160") != std::string::npos);
}

TEST_CASE("synth size and seed") {
  testing::TempDir dir;
  const auto a = small_corpus(dir, 2, "42");
  CHECK(count_ext(a / "wav", ".wav") == 8);
  const auto b = small_corpus(dir, 2, "43");
  const auto a2 = dir / "again";
  REQUIRE(run_cli({"synth", "--out", a2.string(), "--clips-per-class", "2", "--seed", "42"}).code == 0);
  const auto first = *fs::directory_iterator(a / "wav");
  const auto name = first.path().filename();
  CHECK(io::read_file(a / "wav" / name) == io::read_file(a2 / "wav" / name));
  CHECK(io::read_file(a / "wav" / name) != io::read_file(b / "wav" / name));
  CHECK(io::read_file(a / "manifest.csv") == io::read_file(a2 / "manifest.csv"));
}

TEST_CASE("encode a single WAV and a manifest") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  const auto wav = (*fs::directory_iterator(corpus / "wav")).path();
  const auto one = dir / "one";
  REQUIRE(run_cli({"encode", wav.string(), "--scheme", "phase", "--out", one.string()}).code == 0);
  CHECK(count_ext(one, ".csv") == 1);
  CHECK(count_ext(one, ".meta") == 1);

  // Manifest with three rows.
  std::string manifest = "path,label,split\n";
  int rows = 0;
  for (const auto& e : fs::directory_iterator(corpus / "wav")) {
    if (rows++ == 3) break;
    manifest += e.path().string() + ",x," + (rows % 2 ? "train" : "test") + "\n";
  }
  io::write_file_atomic(dir / "three.csv", manifest);
  const auto three = dir / "three";
  REQUIRE(run_cli({"encode", (dir / "three.csv").string(), "--out", three.string(), "--format", "json"}).code == 0);
  CHECK(count_ext(three, ".csv") == 3);
  CHECK(count_ext(three, ".meta") == 3);
}

TEST_CASE("bad config key exits 2 and names the key") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  io::write_file_atomic(dir / "bad.json", std::string(R"({"encoder": {"bogus": 1}})"));
  const auto r = run_cli({"encode", (corpus / "manifest.csv").string(), "--config",
                          (dir / "bad.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("encoder.bogus") != std::string::npos);
}

TEST_CASE("encode failure names the clip") {
  testing::TempDir dir;
  io::write_file_atomic(dir / "broken.wav", std::string("not a wav"));
  const auto r = run_cli({"encode", (dir / "broken.wav").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("broken.wav") != std::string::npos);
}

TEST_CASE("stats over encoded patterns") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  const auto empty = dir / "empty";
  fs::create_directories(empty);
  CHECK(run_cli({"stats", empty.string()}).code == cli::kExitFailure);

  const auto lat = dir / "lat";
  REQUIRE(run_cli({"encode", (corpus / "manifest.csv").string(), "--scheme", "latency", "--out", lat.string()}).code == 0);
  const auto r = run_cli({"stats", lat.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"scheme\":\"latency\"") != std::string::npos);
  CHECK(r.out.find("\"n_patterns\":8") != std::string::npos);

  // Single pattern: its own rates.
  const auto single = dir / "single";
  fs::create_directories(single);
  const auto p = testing::make_pattern({{0.1, 0.2, 0.3, 0.4}}, 2.0);
  save_pattern(p, single, "p");
  const auto s = run_cli({"stats", single.string()});
  REQUIRE(s.code == 0);
  CHECK(s.out == "scheme,n_patterns,n_neurons,total_rate,per_neuron_rate\nlatency,1,1,2,2\n");

  // Mixed schemes.
  save_pattern(testing::make_pattern({{0.1}}, 1.0, Scheme::Threshold), single, "q");
  const auto mixed = run_cli({"stats", single.string()});
  CHECK(mixed.code == cli::kExitFailure);
  CHECK(mixed.err.find("scheme") != std::string::npos);
}

TEST_CASE("run writes tables, models and reproducible reports") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  const auto manifest = (corpus / "manifest.csv").string();

  const auto one = dir / "one";
  REQUIRE(run_cli({"run", manifest, "--scheme", "latency", "--classifier", "svm", "--out", one.string()}).code == 0);
  auto rows = io::split(io::read_file(one / "accuracy.csv"), '\n');
  CHECK(rows.size() == 3);  // header, one row, trailing empty
  CHECK(fs::exists(one / "models" / "latency_v1_svm.model"));
  CHECK(fs::exists(one / "models" / "latency_v2_svm.model"));

  const auto full = dir / "full";
  REQUIRE(run_cli({"run", manifest, "--out", full.string(), "--jobs", "2"}).code == 0);
  rows = io::split(io::read_file(full / "accuracy.csv"), '\n');
  CHECK(rows.size() == 7);
  rows = io::split(io::read_file(full / "snn_accuracy.csv"), '\n');
  CHECK(rows.size() == 7);
  CHECK(count_ext(full / "models", ".model") == 15);

  const auto again = dir / "again";
  REQUIRE(run_cli({"run", manifest, "--out", again.string()}).code == 0);
  CHECK(io::read_file(full / "report.json") == io::read_file(again / "report.json"));
  CHECK(io::read_file(full / "accuracy.csv") == io::read_file(again / "accuracy.csv"));
  for (const auto& e : fs::directory_iterator(full / "models")) {
    CHECK(io::read_file(e.path()) == io::read_file(again / "models" / e.path().filename()));
  }
}

TEST_CASE("run with an empty split exits 2") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  std::string text;
  for (const auto& line : io::split(io::read_file(corpus / "manifest.csv"), '\n')) {
    if (line.find(",test") == std::string::npos && !line.empty()) text += line + "\n";
  }
  io::write_file_atomic(corpus / "train_only.csv", text);
  const auto r = run_cli({"run", (corpus / "train_only.csv").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitUsage);
}

TEST_CASE("flags override the config file") {
  testing::TempDir dir;
  const auto corpus = small_corpus(dir);
  io::write_file_atomic(dir / "c.json", std::string(R"({"seed": 5, "classifiers": ["svm"],
                                                        "encoder": {"schemes": ["phase"]}})"));
  const auto out = dir / "o";
  REQUIRE(run_cli({"run", (corpus / "manifest.csv").string(), "--config", (dir / "c.json").string(),
                   "--seed", "11", "--scheme", "threshold", "--out", out.string()}).code == 0);
  const auto report = io::read_file(out / "report.json");
  CHECK(report.find("\"seed\": 11") != std::string::npos);
  CHECK(report.find("\"scheme\": \"threshold\"") != std::string::npos);
  CHECK(report.find("\"scheme\": \"phase\"") == std::string::npos);
}
