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
#include <span>
#include <string>
#include <vector>

namespace spikecode {

/// Mono audio, amplitudes in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::string id;

  double duration() const {
    return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Throws IngestionError unless sample_rate > 0, samples non-empty and |s| <= 1.
void validate_clip(const AudioClip& clip);

// RIFF/WAVE decoding. Accepts PCM 8/16/24/32-bit integer and 32-bit float,
// mono or multichannel (mixed to mono by averaging). Integer PCM is scaled
// by 1/2^(bits-1); 8-bit data is unsigned and re-centred first.
AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string id = {});
AudioClip read_wav(const std::filesystem::path& path);

/// 16-bit PCM mono encoding, samples clipped to [-1, 1].
std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate);
void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate);

}  // namespace spikecode
