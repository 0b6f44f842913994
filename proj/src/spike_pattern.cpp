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

#include "spikecode/spike_pattern.hpp"

#include <map>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Latency: return "latency";
    case Scheme::Phase: return "phase";
    case Scheme::PopLatency: return "pop_latency";
    case Scheme::PopPhase: return "pop_phase";
    case Scheme::Threshold: return "threshold";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  std::string n(name);
  for (char& ch : n) {
    if (ch == '-') ch = '_';
  }
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == n) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

SpikePattern::SpikePattern(int n_neurons, double duration, std::string clip_id, Scheme scheme)
    : duration(duration), clip_id(std::move(clip_id)), scheme(scheme) {
  trains.resize(static_cast<std::size_t>(n_neurons));
  for (int n = 0; n < n_neurons; ++n) trains[static_cast<std::size_t>(n)].neuron_id = n;
}

std::size_t SpikePattern::total_spikes() const {
  std::size_t total = 0;
  for (const auto& t : trains) total += t.times.size();
  return total;
}

void validate_pattern(const SpikePattern& p) {
  if (!(p.duration > 0)) throw EncodingError("pattern '" + p.clip_id + "': duration must be > 0");
  for (std::size_t n = 0; n < p.trains.size(); ++n) {
    const auto& train = p.trains[n];
    if (train.neuron_id != static_cast<int>(n)) {
      throw EncodingError("pattern '" + p.clip_id + "': neuron ids out of order");
    }
    for (std::size_t k = 0; k < train.times.size(); ++k) {
      const double t = train.times[k];
      if (!(t >= 0.0 && t <= p.duration)) {
        throw EncodingError("pattern '" + p.clip_id + "': spike time outside [0, duration]");
      }
      if (k > 0 && !(t > train.times[k - 1])) {
        throw EncodingError("pattern '" + p.clip_id + "': spike times not strictly increasing");
      }
    }
  }
}

std::string pattern_to_csv(const SpikePattern& p) {
  std::string out = "neuron_id,time_s\n";
  for (const auto& train : p.trains) {
    for (double t : train.times) {
      out += std::to_string(train.neuron_id);
      out += ',';
      out += io::format_double("%.9f", t);
      out += '\n';
    }
  }
  return out;
}

std::string pattern_metadata(const SpikePattern& p) {
  std::string out;
  out += "scheme=" + std::string(scheme_name(p.scheme)) + "\n";
  out += "n_neurons=" + std::to_string(p.n_neurons()) + "\n";
  out += "duration=" + io::exact(p.duration) + "\n";
  out += "clip_id=" + p.clip_id + "\n";
  return out;
}

SpikePattern pattern_from_text(std::string_view csv, std::string_view metadata) {
  std::map<std::string, std::string, std::less<>> meta;
  std::size_t line_no = 0;
  for (const auto& line : io::split(metadata, '\n')) {
    ++line_no;
    const auto t = io::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    meta.emplace(std::string(t.substr(0, eq)), std::string(t.substr(eq + 1)));
  }
  for (const char* key : {"scheme", "n_neurons", "duration", "clip_id"}) {
    if (!meta.contains(key)) throw ParseError(std::string("metadata missing '") + key + "'");
  }
  const auto n_neurons = io::parse_int(meta["n_neurons"]);
  if (n_neurons < 0) throw ParseError("n_neurons must be >= 0");
  SpikePattern p(static_cast<int>(n_neurons), io::parse_double(meta["duration"]),
                 meta["clip_id"], parse_scheme(meta["scheme"]));

  line_no = 0;
  for (const auto& line : io::split(csv, '\n')) {
    ++line_no;
    const auto t = io::trim(line);
    if (t.empty()) continue;
    if (line_no == 1) {
      if (t != "neuron_id,time_s") throw ParseError("expected header 'neuron_id,time_s'", 1);
      continue;
    }
    const auto fields = io::split(t, ',');
    if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
    const auto id = io::parse_int(fields[0], line_no);
    if (id < 0 || id >= n_neurons) throw ParseError("neuron_id out of range", line_no);
    p.trains[static_cast<std::size_t>(id)].times.push_back(io::parse_double(fields[1], line_no));
  }
  validate_pattern(p);
  return p;
}

void save_pattern(const SpikePattern& pattern, const std::filesystem::path& dir,
                  const std::string& stem) {
  io::write_file_atomic(dir / (stem + ".csv"), pattern_to_csv(pattern));
  io::write_file_atomic(dir / (stem + ".meta"), pattern_metadata(pattern));
}

SpikePattern load_pattern(const std::filesystem::path& csv_path) {
  auto meta_path = csv_path;
  meta_path.replace_extension(".meta");
  return pattern_from_text(io::read_file(csv_path), io::read_file(meta_path));
}

}  // namespace spikecode
