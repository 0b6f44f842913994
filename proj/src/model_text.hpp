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

// Line-oriented model files:
//
//   spikecode <kind> 1
//   <key> <value>
//   <key> <v0> <v1> ...
//
// Reals are written with 17 significant digits so reload is bit-exact.
// Fields are read back in the order they were written.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spikecode/error.hpp"
#include "spikecode/io.hpp"

namespace spikecode::model_text {

class Writer {
 public:
  explicit Writer(std::string_view kind) { out_ = "spikecode " + std::string(kind) + " 1\n"; }

  void field(std::string_view key, std::string_view value) {
    out_.append(key).append(" ").append(value).append("\n");
  }
  void field(std::string_view key, const std::string& value) { field(key, std::string_view(value)); }
  void field(std::string_view key, const char* value) { field(key, std::string_view(value)); }
  void field(std::string_view key, double value) { field(key, io::exact(value)); }
  void field(std::string_view key, int value) { field(key, std::to_string(value)); }
  void field(std::string_view key, std::uint64_t value) { field(key, std::to_string(value)); }

  void row(std::string_view key, std::span<const double> values) {
    out_.append(key);
    for (double v : values) out_.append(" ").append(io::exact(v));
    out_.append("\n");
  }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view text, std::string_view kind) : lines_(io::split(text, '\n')) {
    const std::string expected = "spikecode " + std::string(kind) + " 1";
    if (lines_.empty() || io::trim(lines_[0]) != expected) {
      throw ParseError("expected header '" + expected + "'", 1);
    }
    pos_ = 1;
  }

  std::string text(std::string_view key) {
    const auto [line, rest] = next(key);
    (void)line;
    return rest;
  }
  double real(std::string_view key) {
    const auto [line, rest] = next(key);
    return io::parse_double(rest, line);
  }
  long long integer(std::string_view key) {
    const auto [line, rest] = next(key);
    return io::parse_int(rest, line);
  }
  std::vector<double> row(std::string_view key, std::size_t expected) {
    const auto [line, rest] = next(key);
    std::vector<double> out;
    out.reserve(expected);
    if (!rest.empty()) {
      for (const auto& f : io::split(rest, ' ')) out.push_back(io::parse_double(f, line));
    }
    if (out.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) + " values for '" +
                           std::string(key) + "'",
                       line);
    }
    return out;
  }

  /// Rejects trailing non-empty lines.
  void finish() {
    for (; pos_ < lines_.size(); ++pos_) {
      if (!io::trim(lines_[pos_]).empty()) throw ParseError("unexpected trailing data", pos_ + 1);
    }
  }

 private:
  std::pair<std::size_t, std::string> next(std::string_view key) {
    if (pos_ >= lines_.size()) throw ParseError("missing '" + std::string(key) + "'");
    const std::size_t line = pos_ + 1;
    std::string_view l = lines_[pos_++];
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    const auto sp = l.find(' ');
    const auto k = l.substr(0, sp);
    if (k != key) throw ParseError("expected '" + std::string(key) + "'", line);
    return {line, sp == std::string_view::npos ? std::string() : std::string(l.substr(sp + 1))};
  }

  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace spikecode::model_text
