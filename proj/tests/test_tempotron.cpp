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
#include <cmath>
#include <random>

#include "doctest.h"
#include "spikecode/error.hpp"
#include "spikecode/harness.hpp"
#include "spikecode/tempotron.hpp"
#include "test_support.hpp"

using namespace spikecode;
using testing::make_pattern;

namespace {

TempotronModel blank(int afferents, int classes = 2) {
  std::vector<std::string> labels;
  for (int c = 0; c < classes; ++c) labels.push_back(std::string(1, static_cast<char>('a' + c)));
  TempotronParams p;
  p.init_max_weight = 0.0;
  return make_tempotron(afferents, labels, p, 1);
}

SpikePattern random_pattern(std::mt19937_64& rng, int afferents, double duration) {
  std::uniform_real_distribution<double> u(0.0, duration);
  std::uniform_int_distribution<int> count(0, 4);
  std::vector<std::vector<double>> times(static_cast<std::size_t>(afferents));
  for (auto& t : times) {
    const int k = count(rng);
    for (int i = 0; i < k; ++i) t.push_back(u(rng));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  return make_pattern(times, duration);
}

std::vector<double> random_weights(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = u(rng);
  return w;
}

}  // namespace

TEST_CASE("kernel shape") {
  const double tm = 0.020, ts = 0.005;
  const double v0 = kernel_norm(tm, ts);
  const double tp = kernel_peak_time(tm, ts);
  CHECK(tp == doctest::Approx(tm * ts * std::log(tm / ts) / (tm - ts)).epsilon(1e-15));
  CHECK(psp_kernel(0.0, tm, ts, v0) == 0.0);
  CHECK(std::abs(psp_kernel(tp, tm, ts, v0) - 1.0) <= 1e-9);
  CHECK(psp_kernel(-0.001, tm, ts, v0) == 0.0);
  // Dense scan: nothing exceeds the analytic peak.
  double best = 0, best_t = 0;
  for (int i = 0; i <= 200000; ++i) {
    const double t = i * 1e-6;
    const double k = psp_kernel(t, tm, ts, v0);
    if (k > best) {
      best = k;
      best_t = t;
    }
  }
  CHECK(best <= 1.0 + 1e-12);
  CHECK(std::abs(best_t - tp) <= 1e-6);
  CHECK_THROWS_AS(kernel_norm(0.005, 0.020), ConfigError);
}

TEST_CASE("membrane potential examples") {
  auto m = blank(2);
  const auto single = make_pattern({{0.0}, {}}, 0.1);
  const std::vector<double> zero{0.0, 0.0};
  for (double t : {0.0, 0.01, 0.05}) CHECK(membrane_potential(single, zero, m, t) == 0.0);
  const std::vector<double> unit{1.0, 0.0};
  CHECK(std::abs(membrane_potential(single, unit, m, m.t_peak()) - 1.0) <= 1e-9);
  const auto twin = make_pattern({{0.01}, {0.01}}, 0.1);
  const auto one = make_pattern({{0.01}, {}}, 0.1);
  const std::vector<double> halves{0.5, 0.5};
  for (double t = 0; t < 0.1; t += 0.0037) {
    CHECK(membrane_potential(twin, halves, m, t) ==
          doctest::Approx(membrane_potential(one, unit, m, t)).epsilon(1e-12));
  }
}

TEST_CASE("causality: moving a later spike leaves earlier V unchanged") {
  std::mt19937_64 rng(1);
  auto m = blank(6);
  for (int k = 0; k < 100; ++k) {
    auto p = random_pattern(rng, 6, 0.2);
    const auto w = random_weights(rng, 6);
    auto q = p;
    q.trains[3].times.push_back(0.15);
    auto r = p;
    r.trains[3].times.push_back(0.19);
    for (double t = 0; t < 0.15; t += 0.003) {
      CHECK(membrane_potential(q, w, m, t) == membrane_potential(p, w, m, t));
      CHECK(membrane_potential(r, w, m, t) == membrane_potential(p, w, m, t));
    }
  }
}

TEST_CASE("linearity in weights and additivity over afferents") {
  std::mt19937_64 rng(2);
  auto m = blank(5);
  std::uniform_real_distribution<double> u(-2, 2), tt(0, 0.2);
  for (int k = 0; k < 100; ++k) {
    const auto p = random_pattern(rng, 5, 0.2);
    const auto w1 = random_weights(rng, 5), w2 = random_weights(rng, 5);
    const double a = u(rng), b = u(rng), t = tt(rng);
    std::vector<double> mix(5);
    for (std::size_t i = 0; i < 5; ++i) mix[i] = a * w1[i] + b * w2[i];
    const double lhs = membrane_potential(p, mix, m, t);
    const double rhs = a * membrane_potential(p, w1, m, t) + b * membrane_potential(p, w2, m, t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
    double parts = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<double> only(5, 0.0);
      only[i] = w1[i];
      parts += membrane_potential(p, only, m, t);
    }
    CHECK(membrane_potential(p, w1, m, t) == doctest::Approx(parts).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("peak of a single spike sits t_peak after it") {
  auto m = blank(3);
  const std::vector<double> w{0.0, 0.7, 0.0};
  for (double s : {0.0, 0.0123, 0.05}) {
    const auto p = make_pattern({{}, {s}, {}}, 0.1);
    const auto pk = peak_potential(p, w, m);
    CHECK(std::abs(pk.time - (s + m.t_peak())) <= m.grid_step);
    CHECK(pk.value == doctest::Approx(0.7).epsilon(1e-9));
  }
}

TEST_CASE("fast peak search agrees with the direct kernel sum") {
  std::mt19937_64 rng(3);
  auto m = blank(8);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_pattern(rng, 8, 0.3);
    const auto w = random_weights(rng, 8);
    const auto pk = peak_potential(p, w, m);
    if (pk.time <= 0.3 + 1e-12) {
      CHECK(pk.value == doctest::Approx(membrane_potential(p, w, m, pk.time)).epsilon(1e-9).scale(1.0));
    }
    for (double t = 0; t <= 0.3; t += m.grid_step) {
      CHECK(membrane_potential(p, w, m, t) <= pk.value + 1e-9);
    }
  }
}

TEST_CASE("update sign at the pre-update t_max") {
  const auto p = make_pattern({{0.01, 0.03}, {0.02}, {}, {0.05}}, 0.1);
  auto m = blank(4);
  // Row b fires strongly (non-target), row a is silent (target).
  for (double& w : m.row(0)) w = 0.1;
  for (double& w : m.row(1)) w = 2.0;
  const auto before_a = peak_potential(p, m.row(0), m);
  const auto before_b = peak_potential(p, m.row(1), m);
  REQUIRE(before_a.value < 1.0);
  REQUIRE(before_b.value >= 1.0);
  const std::vector<SpikePattern> ps{p};
  const std::vector<std::string> ys{"a"};
  const auto after = train_tempotron(ps, ys, m, 1, 0);

  auto expected_delta = [&](double t) {
    double sq = 0;
    for (int n = 0; n < 4; ++n) {
      double s = 0;
      for (double x : p.times(n)) s += psp_kernel(t - x, m.tau_m, m.tau_s, m.kernel_norm);
      sq += s * s;
    }
    return m.learn_rate * sq;
  };
  const double dv_a = membrane_potential(p, after.row(0), m, before_a.time) -
                      membrane_potential(p, m.row(0), m, before_a.time);
  const double dv_b = membrane_potential(p, after.row(1), m, before_b.time) -
                      membrane_potential(p, m.row(1), m, before_b.time);
  CHECK(dv_a >= 0.0);
  CHECK(dv_a == doctest::Approx(expected_delta(before_a.time)).epsilon(1e-9));
  CHECK(dv_b <= 0.0);
  CHECK(dv_b == doctest::Approx(-expected_delta(before_b.time)).epsilon(1e-9));
}

TEST_CASE("update signs hold on random errors") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    auto m = blank(6);
    const auto p = random_pattern(rng, 6, 0.2);
    for (double& w : m.weights) w = std::uniform_real_distribution<double>(-0.5, 1.5)(rng);
    const auto pk0 = peak_potential(p, m.row(0), m);
    const auto pk1 = peak_potential(p, m.row(1), m);
    const std::vector<SpikePattern> ps{p};
    const std::vector<std::string> ys{"a"};
    const auto after = train_tempotron(ps, ys, m, 1, 0);
    CHECK(membrane_potential(p, after.row(0), m, pk0.time) >=
          membrane_potential(p, m.row(0), m, pk0.time) - 1e-12);
    CHECK(membrane_potential(p, after.row(1), m, pk1.time) <=
          membrane_potential(p, m.row(1), m, pk1.time) + 1e-12);
  }
}

TEST_CASE("a single target pattern is learned") {
  const auto p = make_pattern({{0.01}, {0.02, 0.06}, {0.04}}, 0.1);
  const auto q = make_pattern({{}, {}, {0.09}}, 0.1);
  const std::vector<SpikePattern> ps{p, q};
  const std::vector<std::string> ys{"a", "b"};
  TempotronTrace trace;
  // Default small random init: with all-zero weights V is flat and t_max gives no gradient.
  TempotronParams params;
  params.learn_rate = 1e-2;
  const auto init = make_tempotron(3, {"a", "b"}, params, 9);
  const auto m = train_tempotron(ps, ys, init, 500, 9, &trace);
  CHECK(peak_potential(p, m.row(0), m).value >= m.v_threshold);
  CHECK(trace.errors_per_epoch.back() == 0);
  CHECK(trace.errors_per_epoch.size() < 500);
}

TEST_CASE("3-class threshold-coded synthetic corpus reaches 95% training accuracy") {
  SyntheticSpec spec;
  spec.n_classes = 3;
  spec.clips_per_class = 20;
  const auto corpus = generate_synthetic(spec);
  const auto set = analyze_corpus(corpus.clips, corpus.manifest, FilterbankSpec{});
  const auto patterns = encode_all(set.train, EncoderConfig::defaults(Scheme::Threshold));
  TempotronParams params;
  REQUIRE(params.epochs == 200);
  const auto m = fit_tempotron(patterns, set.train_labels, params, 42);
  int correct = 0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    correct += classify(m, patterns[i]) == set.train_labels[i];
  }
  CHECK(100.0 * correct / static_cast<double>(patterns.size()) >= 95.0);
}

TEST_CASE("classification rule") {
  auto m = blank(3, 3);
  const auto p = make_pattern({{0.01}, {0.01}, {0.01}}, 0.1);
  CHECK(classify(m, p) == "a");  // all-zero weights
  // Only neuron 2 crosses.
  m.row(0)[0] = 0.9;
  m.row(1)[1] = 0.5;
  m.row(2)[2] = 1.2;
  CHECK(classify(m, p) == "c");
  m.row(2)[2] = 0.3;
  CHECK(classify(m, p) == "a");  // none cross: argmax
  m.row(1)[1] = 0.9;
  CHECK(classify(m, p) == "a");  // tie: lower index
  m.row(0)[0] = 1.5;
  m.row(1)[1] = 3.0;
  CHECK(classify(m, p) == "b");
}

TEST_CASE("model text round-trips bit-exactly") {
  testing::TempDir dir;
  TempotronParams params;
  params.init_max_weight = 0.1;
  auto m = make_tempotron(7, {"x", "y", "z"}, params, 123);
  m.weights[4] = 1.0 / 3.0;
  save_tempotron_model(m, dir / "t.model");
  const auto back = load_tempotron_model(dir / "t.model");
  CHECK(back == m);
  CHECK(tempotron_model_to_text(back) == tempotron_model_to_text(m));
  CHECK_THROWS_AS(tempotron_model_from_text("tempotron-model\nn_classes 2\n"), ParseError);
}

TEST_CASE("shape and training errors") {
  auto m = blank(3);
  const auto p = make_pattern({{0.01}, {}}, 0.1);
  CHECK_THROWS_AS(classify(m, p), ShapeError);
  const std::vector<SpikePattern> ps{p};
  const std::vector<std::string> ys{"a"};
  CHECK_THROWS_AS(train_tempotron(ps, ys, m, 1, 0), ShapeError);
  const auto ok = make_pattern({{0.01}, {}, {}}, 0.1);
  const std::vector<SpikePattern> oks{ok};
  const std::vector<std::string> unknown{"zzz"};
  CHECK_THROWS_AS(train_tempotron(oks, unknown, m, 1, 0), TrainingError);
  CHECK_THROWS_AS(make_tempotron(3, {"only"}, TempotronParams{}, 0), TrainingError);
}

TEST_CASE("training is deterministic in the seed") {
  std::mt19937_64 rng(5);
  std::vector<SpikePattern> ps;
  std::vector<std::string> ys;
  for (int i = 0; i < 12; ++i) {
    ps.push_back(random_pattern(rng, 10, 0.2));
    ys.push_back(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
  }
  const auto a = fit_tempotron(ps, ys, TempotronParams{}, 7);
  const auto b = fit_tempotron(ps, ys, TempotronParams{}, 7);
  CHECK(a == b);
}
