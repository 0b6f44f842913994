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

#include <cmath>
#include <random>

#include "doctest.h"
#include "spikecode/encoders.hpp"
#include "spikecode/error.hpp"
#include "spikecode/spike_pattern.hpp"
#include "test_support.hpp"

using namespace spikecode;

TEST_CASE("scheme names round-trip") {
  for (Scheme s : kAllSchemes) CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK(parse_scheme("pop-latency") == Scheme::PopLatency);
  CHECK_THROWS_AS(parse_scheme("rate"), ConfigError);
}

TEST_CASE("csv layout") {
  const auto p = testing::make_pattern({{0.25, 0.5}, {}, {0.125}}, 1.0);
  const auto csv = pattern_to_csv(p);
  CHECK(csv.rfind("neuron_id,time_s\n", 0) == 0);
  CHECK(csv.find("0,0.250000000\n0,0.500000000\n") != std::string::npos);
  CHECK(csv.find("2,0.125000000\n") != std::string::npos);
}

TEST_CASE("spike csv round-trips at printed precision") {
  std::mt19937_64 rng(4);
  Spectrogram s;
  s.n_channels = 20;
  s.n_frames = 60;
  s.values = testing::random_row(rng, 20 * 60);
  for (Scheme scheme : kAllSchemes) {
    auto p = encode(s, EncoderConfig::defaults(scheme));
    p.clip_id = "clip_7";
    const auto csv = pattern_to_csv(p);
    const auto meta = pattern_metadata(p);
    const auto back = pattern_from_text(csv, meta);
    CHECK(back.scheme == scheme);
    CHECK(back.clip_id == "clip_7");
    CHECK(back.n_neurons() == p.n_neurons());
    CHECK(back.duration == p.duration);
    REQUIRE(back.total_spikes() == p.total_spikes());
    for (int n = 0; n < p.n_neurons(); ++n) {
      for (std::size_t k = 0; k < p.times(n).size(); ++k) {
        CHECK(std::abs(back.times(n)[k] - p.times(n)[k]) <= 5e-10);
      }
    }
    CHECK(pattern_to_csv(back) == csv);
    CHECK(pattern_metadata(back) == meta);
  }
}

TEST_CASE("save and load through files") {
  testing::TempDir dir;
  const auto p = testing::make_pattern({{0.001}, {0.002, 0.3}}, 0.5, Scheme::Phase, "a b");
  save_pattern(p, dir.path(), "a");
  CHECK(std::filesystem::exists(dir / "a.csv"));
  CHECK(std::filesystem::exists(dir / "a.meta"));
  const auto back = load_pattern(dir / "a.csv");
  CHECK(back.scheme == Scheme::Phase);
  CHECK(back.clip_id == "a b");
  CHECK(back.times(1) == std::vector<double>{0.002, 0.3});
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate_pattern(testing::make_pattern({{0.1}}, 0.0)), EncodingError);
  CHECK_THROWS_AS(validate_pattern(testing::make_pattern({{0.2, 0.1}}, 1.0)), EncodingError);
  CHECK_THROWS_AS(validate_pattern(testing::make_pattern({{0.1, 0.1}}, 1.0)), EncodingError);
  CHECK_THROWS_AS(validate_pattern(testing::make_pattern({{1.5}}, 1.0)), EncodingError);
  auto p = testing::make_pattern({{0.1}, {0.2}}, 1.0);
  p.trains[1].neuron_id = 0;
  CHECK_THROWS_AS(validate_pattern(p), EncodingError);
}

TEST_CASE("malformed text") {
  const auto p = testing::make_pattern({{0.1}}, 1.0);
  const auto meta = pattern_metadata(p);
  CHECK_THROWS_AS(pattern_from_text("neuron_id,time_s\n5,0.1\n", meta), ParseError);
  CHECK_THROWS_AS(pattern_from_text("id,t\n", meta), ParseError);
  CHECK_THROWS_AS(pattern_from_text("neuron_id,time_s\n0,abc\n", meta), ParseError);
  CHECK_THROWS_AS(pattern_from_text("neuron_id,time_s\n", "scheme=latency\n"), ParseError);
  try {
    pattern_from_text("neuron_id,time_s\n0,0.1\n0\n", meta);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
