# Copyright 2026 The spikecode Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import spikecode as sc


def tone(freq, seconds=0.5, sr=16000, amp=0.5):
    t = np.arange(int(seconds * sr)) / sr
    return amp * np.sin(2 * np.pi * freq * t)


def test_schemes_and_default_config():
    assert sc.schemes() == ["latency", "phase", "pop_latency", "pop_phase", "threshold"]
    cfg = json.loads(sc.default_config())
    assert cfg["seed"] == 42


def test_wav_round_trip(tmp_path):
    x = tone(440.0)
    sc.write_wav(tmp_path / "a.wav", x, 16000)
    y, sr = sc.read_wav(tmp_path / "a.wav")
    assert sr == 16000
    assert np.max(np.abs(x - y)) <= 1.0 / 32767


def test_analyze_shape_and_range():
    s = sc.analyze(tone(1000.0, 1.0), 16000)
    assert s.shape == (20, 99)
    assert s.min() >= 0.0 and s.max() <= 1.0


def test_latency_formula():
    times = sc.encode_latency(np.array([0.25, 0.005, 1.0]))
    np.testing.assert_allclose(times, [0.0075, 0.02], atol=1e-15)


def test_smo_tie_goes_to_earlier_peak():
    assert sc.smo_nearest_peak(0.5, 1.0, 0.0) == 0.0
    assert sc.smo_nearest_peak(0.6, 1.0, 0.0) == pytest.approx(1.0)


def test_encode_and_vectorize_lengths():
    s = sc.analyze(tone(700.0, 0.8), 16000)
    lat = sc.encode(s, "latency")
    pop = sc.encode(s, "pop_latency")
    assert lat.n_neurons == 20 and pop.n_neurons == 200
    assert sc.vectorize(lat, "v1", mean_duration=lat.duration).shape == (20,)
    assert sc.vectorize(pop, "v2", n_time_bins=82).shape == (200 * 82,)
    back = sc.SpikePattern.from_text(pop.to_csv(), pop.metadata())
    assert back.total_spikes == pop.total_spikes


def test_unknown_config_key_raises():
    with pytest.raises(sc.ConfigError, match="bogus"):
        sc.analyze(tone(500.0), 16000, config='{"bogus": 1}')


def test_svm_separates_blobs():
    rng = np.random.default_rng(0)
    a = rng.normal(0.0, 0.3, (30, 2))
    b = rng.normal(3.0, 0.3, (30, 2))
    x = np.vstack([a, b])
    y = ["a"] * 30 + ["b"] * 30
    model = sc.train_svm(x, y)
    assert model.predict(x) == y
    again = sc.LinearModel.from_text(model.to_text())
    np.testing.assert_array_equal(again.weights, model.weights)


def test_kernel_peak_is_one():
    t_peak = 0.020 * 0.005 * np.log(4.0) / 0.015
    assert sc.psp_kernel(t_peak) == pytest.approx(1.0, abs=1e-9)
    assert sc.psp_kernel(-0.001) == 0.0


def test_tempotron_learns_two_tones():
    lo = [sc.encode(sc.analyze(tone(300.0 * (1 + 0.02 * k), 0.4), 16000), "threshold") for k in range(3)]
    hi = [sc.encode(sc.analyze(tone(3000.0 * (1 + 0.02 * k), 0.4), 16000), "threshold") for k in range(3)]
    model = sc.train_tempotron(lo + hi, ["lo"] * 3 + ["hi"] * 3, epochs=300, learn_rate=1e-2)
    assert [model.classify(p) for p in lo + hi] == ["lo"] * 3 + ["hi"] * 3


def test_synthetic_experiment(tmp_path):
    cfg = json.dumps({"synthetic": {"clips_per_class": 4}})
    manifest = sc.generate_synthetic(tmp_path, cfg)
    assert manifest.exists()
    r = sc.run_experiment(manifest, "pop_latency", "v1", "svm", cfg)
    assert r["feature_length"] == 200
    assert r["train_accuracy"] == 100.0
    assert len(r["confusion"]) == 4
