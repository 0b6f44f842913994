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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "spikecode/encoders.hpp"
#include "spikecode/error.hpp"
#include "spikecode/vectorizers.hpp"
#include "test_support.hpp"

using namespace spikecode;
using testing::make_pattern;

namespace {

VectorizerConfig v1(double mean_duration) {
  VectorizerConfig c;
  c.scheme = VectorScheme::V1;
  c.mean_duration = mean_duration;
  return c;
}

VectorizerConfig v2(int bins, double window = 0.0) {
  VectorizerConfig c;
  c.scheme = VectorScheme::V2;
  c.n_time_bins = bins;
  c.window = window;
  return c;
}

}  // namespace

TEST_CASE("V1 examples") {
  const auto p = make_pattern({{0.1, 0.2, 0.3}, {0.4}}, 1.0);
  CHECK(vectorize(p, v1(1.0)).values == std::vector<double>{3, 1});
  const auto q = make_pattern({{0.1, 0.2, 0.3, 0.4}, {}}, 2.0);
  CHECK(vectorize(q, v1(1.0)).values == std::vector<double>{2, 0});
  CHECK_THROWS_AS(vectorize(q, v1(0.0)), ConfigError);
}

TEST_CASE("V1 ignores spike order and placement") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<std::vector<double>> a(5), b(5);
    for (int n = 0; n < 5; ++n) {
      const int count = static_cast<int>(u(rng) * 6);
      for (int i = 0; i < count; ++i) {
        a[n].push_back(u(rng));
        b[n].push_back(u(rng));
      }
      std::sort(a[n].begin(), a[n].end());
      std::sort(b[n].begin(), b[n].end());
    }
    CHECK(vectorize(make_pattern(a, 1.0), v1(0.8)).values ==
          vectorize(make_pattern(b, 1.0), v1(0.8)).values);
  }
}

TEST_CASE("V2 continuous bins: spike at bin start is 1, empty cells are 0") {
  const auto p = make_pattern({{0.0}, {}}, 1.0);
  const auto v = vectorize(p, v2(4));
  REQUIRE(v.length() == 8);
  CHECK(v.values[0] == 1.0);
  for (std::size_t i = 1; i < v.length(); ++i) CHECK(v.values[i] == 0.0);
  const auto none = vectorize(make_pattern({{}, {}}, 1.0), v2(4));
  CHECK(std::all_of(none.values.begin(), none.values.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("V2 window bins: spike at window start is 1") {
  const auto p = make_pattern({{0.02}}, 0.1);
  const auto v = vectorize(p, v2(10, 0.01));
  REQUIRE(v.length() == 10);
  CHECK(v.values[2] == 1.0);
  CHECK(v.values[1] == 0.0);
  const auto late = vectorize(make_pattern({{0.0275}}, 0.1), v2(10, 0.01));
  CHECK(late.values[2] == doctest::Approx(0.25));
}

TEST_CASE("V2 window bins stretch shorter patterns over the grid") {
  // 5 windows onto 10 bins: window k lands in bin 2k.
  const auto p = make_pattern({{0.0, 0.01, 0.02, 0.03, 0.04}}, 0.05);
  const auto v = vectorize(p, v2(10, 0.01));
  for (int k = 0; k < 5; ++k) {
    CHECK(v.values[2 * k] == 1.0);
    CHECK(v.values[2 * k + 1] == 0.0);
  }
  // 20 windows onto 10 bins: the first spike of each pair wins.
  const auto q = make_pattern({{0.0005, 0.015}}, 0.2);
  const auto w = vectorize(q, v2(10, 0.01));
  CHECK(w.values[0] == doctest::Approx(0.95));
}

TEST_CASE("V2 earliest spike in a bin wins; values stay in (0, 1]") {
  const auto p = make_pattern({{0.26, 0.3, 0.49999}}, 1.0);
  const auto v = vectorize(p, v2(4));
  CHECK(v.values[1] == doctest::Approx(0.96));
  for (double x : v.values) CHECK((x == 0.0 || (x > 0.0 && x <= 1.0)));
  const auto edge = vectorize(make_pattern({{1.0}}, 1.0), v2(4));
  CHECK(edge.values[3] == doctest::Approx(1e-6));
}

TEST_CASE("V2 is monotone in spike timing within a bin") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double window : {0.0, 0.01}) {
    for (int k = 0; k < 200; ++k) {
      const int bin = static_cast<int>(u(rng) * 10);
      const double a = (bin + 0.01 + 0.98 * u(rng)) * 0.01;
      const double b = (bin + 0.01 + 0.98 * u(rng)) * 0.01;
      if (a == b) continue;
      const auto va = vectorize(make_pattern({{}, {a}}, 0.1), v2(10, window)).values;
      const auto vb = vectorize(make_pattern({{}, {b}}, 0.1), v2(10, window)).values;
      int differ = 0;
      for (std::size_t i = 0; i < va.size(); ++i) differ += va[i] != vb[i];
      CHECK(differ == 1);
      const std::size_t idx = static_cast<std::size_t>(10 + bin);
      CHECK(((a < b) == (va[idx] > vb[idx])));
    }
  }
}

TEST_CASE("V2 layout index is n * N_T + b") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> neuron(0, 6), bin(0, 11);
  for (double window : {0.0, 0.01}) {
    for (int k = 0; k < 200; ++k) {
      const int n = neuron(rng), b = bin(rng);
      std::vector<std::vector<double>> times(7);
      times[static_cast<std::size_t>(n)] = {(b + 0.5) * 0.01};
      const auto v = vectorize(make_pattern(times, 0.12), v2(12, window)).values;
      const auto it = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
      REQUIRE(it != v.end());
      const auto pos = static_cast<int>(it - v.begin());
      CHECK(pos / 12 == n);
      CHECK(pos % 12 == b);
    }
  }
}

TEST_CASE("vector lengths per scheme") {
  Spectrogram s;
  s.n_channels = 20;
  s.n_frames = 82;
  s.values.assign(20 * 82, 0.5);
  const int v1_len[] = {20, 20, 200, 200, 400};
  int i = 0;
  for (Scheme scheme : kAllSchemes) {
    const auto p = encode(s, EncoderConfig::defaults(scheme));
    CHECK(vectorize(p, v1(0.82)).length() == static_cast<std::size_t>(v1_len[i]));
    CHECK(vectorize(p, v2(82, 0.01)).length() == static_cast<std::size_t>(v1_len[i] * 82));
    CHECK(vectorize(p, v2(74, 0.01)).length() == static_cast<std::size_t>(v1_len[i] * 74));
    ++i;
  }
  CHECK(20 * 82 == 1640);
  CHECK(200 * 82 == 16400);
  CHECK(20 * 74 == 1480);
  CHECK(200 * 74 == 14800);
}

TEST_CASE("bad V2 parameters") {
  const auto p = make_pattern({{0.1}}, 1.0);
  CHECK_THROWS_AS(vectorize(p, v2(0)), ConfigError);
  CHECK_THROWS_AS(vectorize(p, v2(-3)), ConfigError);
  CHECK_THROWS_AS(vectorize(p, v2(4, -0.01)), ConfigError);
}

TEST_CASE("dataset helpers") {
  const std::vector<SpikePattern> ps{make_pattern({{}}, 0.8), make_pattern({{}}, 1.0)};
  CHECK(mean_duration(ps) == doctest::Approx(0.9));
  CHECK(default_time_bins(ps, 0.01) == 90);
  CHECK(parse_vector_scheme(vector_scheme_name(VectorScheme::V2)) == VectorScheme::V2);
  CHECK_THROWS_AS(parse_vector_scheme("v3"), ConfigError);
}

TEST_CASE("vectors csv round-trip") {
  std::vector<FeatureVector> xs(2);
  xs[0].values = {0.1, 0.25};
  xs[0].clip_id = "a";
  xs[1].values = {1.0 / 3.0, 0.0};
  xs[1].clip_id = "b";
  const std::vector<std::string> labels{"up", "down"};
  const auto csv = vectors_to_csv(xs, labels);
  CHECK(csv.rfind("clip_id,label,v_0,v_1\n", 0) == 0);
  const auto back = vectors_from_csv(csv, VectorScheme::V1);
  REQUIRE(back.size() == 2);
  CHECK(back[1].second == "down");
  CHECK(back[1].first.clip_id == "b");
  CHECK(back[1].first.values[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}
