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

#include "perpetual_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace perpetual::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || text.empty()) return std::nullopt;
  return value;
}

class Reader {
 public:
  explicit Reader(const Settings& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.has(key); }

  template <typename T>
  T number(const std::string& key, const char* type_name) const {
    const auto v = parse_number<T>(s_.values.at(key));
    if (!v) fail(key, std::string("expected ") + type_name + ", got '" + s_.values.at(key) + "'");
    return *v;
  }

  const std::string& text(const std::string& key) const { return s_.values.at(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(s_.origin.at(key) + ": " + key + ": " + what);
  }

 private:
  const Settings& s_;
};

}  // namespace

void Settings::set(const std::string& key, const std::string& value, const std::string& where) {
  values[key] = value;
  origin[key] = where;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n_lines", "bias",   "t_max",          "trials", "seed", "p_m",     "record_cadence",
      "out",     "format", "source_phasing", "p_s",    "p_l",  "workers", "biases",
      "n_values", "alpha_sq"};
  return keys;
}

Settings parse_config(const std::string& text, const std::string& source) {
  Settings s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    s.set(key, value, where);
  }
  return s;
}

Settings load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto v = parse_number<double>(trim(item));
    if (!v) throw ConfigError("expected a comma-separated list of numbers, got '" + text + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto v = parse_number<int>(trim(item));
    if (!v) throw ConfigError("expected a comma-separated list of integers, got '" + text + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

Config resolve(const Settings& settings, const std::vector<Requirement>& required) {
  Reader r(settings);
  Config c;
  auto needs = [&](Requirement q) {
    return std::find(required.begin(), required.end(), q) != required.end();
  };
  if (needs(Requirement::kNLines) && !r.has("n_lines")) {
    throw ConfigError("missing required setting n_lines (--n)");
  }
  if (needs(Requirement::kBias) && !r.has("bias")) {
    throw ConfigError("missing required setting bias (--bias)");
  }

  if (r.has("n_lines")) {
    c.params.n_lines = r.number<int>("n_lines", "an integer");
    if (c.params.n_lines < 2 || c.params.n_lines % 2 != 0) {
      r.fail("n_lines", "must be an even integer >= 2");
    }
  }
  if (r.has("bias")) {
    c.params.bias = r.number<double>("bias", "a number");
    if (!(c.params.bias > 0.0)) r.fail("bias", "must be > 0");
  }
  if (r.has("t_max")) {
    c.params.t_max = r.number<int64_t>("t_max", "an integer");
    if (c.params.t_max < 0) r.fail("t_max", "must be >= 0");
    c.t_max_given = true;
  } else {
    c.params.t_max = 300 * static_cast<int64_t>(c.params.n_lines);
  }
  if (r.has("trials")) {
    c.run.trials = r.number<int>("trials", "an integer");
    if (c.run.trials < 1) r.fail("trials", "must be >= 1");
  }
  if (r.has("seed")) c.params.seed = r.number<uint64_t>("seed", "an unsigned integer");
  if (r.has("p_m")) {
    c.params.p_m = r.number<double>("p_m", "a number");
    if (c.params.p_m < 0.0 || c.params.p_m > 1.0) r.fail("p_m", "must lie in [0, 1]");
  }
  if (r.has("p_s")) {
    c.params.p_s_override = r.number<double>("p_s", "a number");
    if (*c.params.p_s_override < 0.0 || *c.params.p_s_override > 1.0) {
      r.fail("p_s", "must lie in [0, 1]");
    }
  }
  if (r.has("p_l")) {
    c.params.p_l_override = r.number<double>("p_l", "a number");
    if (*c.params.p_l_override < 0.0 || *c.params.p_l_override > 1.0) {
      r.fail("p_l", "must lie in [0, 1]");
    }
  }
  if (r.has("record_cadence")) {
    c.run.record_cadence = r.number<int64_t>("record_cadence", "an integer");
    if (c.run.record_cadence < 1) r.fail("record_cadence", "must be >= 1");
  }
  if (r.has("workers")) {
    c.run.workers = r.number<int>("workers", "an integer");
    if (c.run.workers < 0) r.fail("workers", "must be >= 0");
  }
  if (r.has("out")) c.out = r.text("out");
  if (r.has("format")) {
    const std::string& f = r.text("format");
    if (f == "csv") {
      c.format = OutputFormat::kCsv;
    } else if (f == "json") {
      c.format = OutputFormat::kJson;
    } else {
      r.fail("format", "must be csv or json");
    }
  }
  if (r.has("source_phasing")) {
    const std::string& f = r.text("source_phasing");
    if (f == "staggered") {
      c.params.source_phasing = SourcePhasing::kStaggered;
    } else if (f == "in-phase" || f == "in_phase") {
      c.params.source_phasing = SourcePhasing::kInPhase;
    } else {
      r.fail("source_phasing", "must be staggered or in-phase");
    }
  }
  auto list = [&](const std::string& key, auto parse) {
    try {
      return parse(r.text(key));
    } catch (const ConfigError& e) {
      r.fail(key, e.what());
    }
  };
  if (r.has("biases")) {
    c.biases = list("biases", parse_double_list);
    for (double b : c.biases) {
      if (!(b > 0.0)) r.fail("biases", "every bias must be > 0");
    }
  }
  if (r.has("n_values")) {
    c.n_values = list("n_values", parse_int_list);
    for (int n : c.n_values) {
      if (n < 2 || n % 2 != 0) r.fail("n_values", "every N must be an even integer >= 2");
    }
  }
  if (r.has("alpha_sq")) {
    c.alpha_sq = list("alpha_sq", parse_double_list);
    for (double a : c.alpha_sq) {
      if (!(a >= 0.0)) r.fail("alpha_sq", "every value must be >= 0");
    }
  }
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace perpetual::cli
