// Copyright 2026 The Perpetual Network Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration shared by the config file and the command line.
//
// A config file holds one `key = value` per line; `#` starts a comment and
// blank lines are ignored. Every key has a command-line flag with the same
// name in kebab case (n_lines -> --n-lines, also --n). Flags are applied after
// the file, so they win.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perpetual/montecarlo.hpp"
#include "perpetual/report.hpp"

namespace perpetual::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw key/value settings before validation; later assignments win.
struct Settings {
  std::map<std::string, std::string> values;
  /// Where each value came from, for diagnostics ("file.cfg:3", "--bias").
  std::map<std::string, std::string> origin;

  void set(const std::string& key, const std::string& value, const std::string& where);
  bool has(const std::string& key) const { return values.count(key) != 0; }
};

/// Every accepted key, in documentation order.
const std::vector<std::string>& known_keys();

/// Parses config text. `source` names the input in error messages, which
/// always carry the line number.
Settings parse_config(const std::string& text, const std::string& source);
Settings load_config(const std::string& path);

struct Config {
  SimParams params;
  RunOptions run;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::vector<double> biases;
  std::vector<int> n_values;
  std::vector<double> alpha_sq;
  bool t_max_given = false;
};

enum class Requirement { kNLines, kBias };

/// Typed, validated view of the settings. Missing required keys, type
/// mismatches and invalid values throw ConfigError naming their origin.
Config resolve(const Settings& settings, const std::vector<Requirement>& required);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace perpetual::cli
