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

#include "spikecode/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

double decode_sample(const std::uint8_t* p, std::uint16_t format, std::uint16_t bits) {
  if (format == kFormatFloat) {
    float f;
    std::uint32_t raw = read_u32(p);
    std::memcpy(&f, &raw, sizeof(f));
    return static_cast<double>(f);
  }
  switch (bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;
      return static_cast<double>(v) / 8388608.0;
    }
    case 32:
      return static_cast<double>(static_cast<std::int32_t>(read_u32(p))) / 2147483648.0;
    default:
      throw IngestionError("unsupported PCM bit depth " + std::to_string(bits));
  }
}

}  // namespace

void validate_clip(const AudioClip& clip) {
  if (!(clip.sample_rate > 0.0)) throw IngestionError("clip '" + clip.id + "': sample_rate must be > 0");
  if (clip.samples.empty()) throw IngestionError("clip '" + clip.id + "': no samples");
  for (double s : clip.samples) {
    if (!(std::abs(s) <= 1.0)) {
      throw IngestionError("clip '" + clip.id + "': sample outside [-1, 1]");
    }
  }
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string id) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IngestionError("'" + id + "' is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw IngestionError("'" + id + "': truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      block_align = read_u16(f + 12);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw IngestionError("'" + id + "': truncated extensible fmt chunk");
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.subspan(body, avail);
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw IngestionError("'" + id + "': missing fmt chunk");
  if (data.empty()) throw IngestionError("'" + id + "': missing or empty data chunk");
  if (format != kFormatPcm && format != kFormatFloat) {
    throw IngestionError("'" + id + "': unsupported WAV format tag " + std::to_string(format));
  }
  if (format == kFormatFloat && bits != 32) {
    throw IngestionError("'" + id + "': only 32-bit float WAV is supported");
  }
  if (channels == 0 || rate == 0) throw IngestionError("'" + id + "': invalid fmt chunk");
  const std::size_t sample_bytes = bits / 8u;
  if (sample_bytes == 0 || block_align < channels * sample_bytes) {
    throw IngestionError("'" + id + "': inconsistent block alignment");
  }

  const std::size_t n_frames = data.size() / block_align;
  AudioClip clip;
  clip.id = std::move(id);
  clip.sample_rate = static_cast<double>(rate);
  clip.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const std::uint8_t* frame = data.data() + i * block_align;
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      sum += decode_sample(frame + c * sample_bytes, format, bits);
    }
    // Float files may exceed full scale slightly.
    clip.samples[i] = std::clamp(sum / channels, -1.0, 1.0);
  }
  validate_clip(clip);
  return clip;
}

AudioClip read_wav(const std::filesystem::path& path) {
  const std::string raw = io::read_file(path);
  const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
  return decode_wav(std::span<const std::uint8_t>(p, raw.size()), path.stem().string());
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate) {
  io::write_file_atomic(path, encode_wav_pcm16(samples, sample_rate));
}

}  // namespace spikecode
