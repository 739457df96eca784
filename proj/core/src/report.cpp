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

#include "perpetual/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "json.hpp"

namespace perpetual {

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

Cell optional_cell(const std::optional<int64_t>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Table timeseries_table(const std::vector<TrialResult>& trials) {
  Table t{"timeseries", {"trial", "t", "computational", "shunt", "total"}, {}};
  for (const TrialResult& r : trials) {
    for (const CountSample& s : r.series) {
      t.rows.push_back({int64_t{r.trial}, s.t, s.computational, s.shunt, s.total});
    }
  }
  return t;
}

Table bias_sweep_table(const std::vector<BiasPoint>& sweep) {
  Table t{"bias_sweep", {"N", "B", "t", "mean_total", "sd_total", "ci95", "trials"}, {}};
  for (const BiasPoint& p : sweep) {
    t.rows.push_back({int64_t{p.n_lines}, p.bias, p.t, p.total.mean, p.total.sd, p.total.ci95,
                      int64_t{p.total.count}});
  }
  return t;
}

Table saturation_table(const std::vector<SaturationPoint>& curve) {
  Table t{"saturation", {"N", "B", "t", "fraction_saturated", "trials"}, {}};
  for (const SaturationPoint& p : curve) {
    t.rows.push_back({int64_t{p.n_lines}, p.bias, p.t, p.fraction, int64_t{p.trials}});
  }
  return t;
}

Table bootup_table(const std::vector<BootupPoint>& points) {
  Table t{"bootup", {"N", "B", "bootup_steps", "trials"}, {}};
  for (const BootupPoint& p : points) {
    t.rows.push_back({int64_t{p.n_lines}, p.bias, optional_cell(p.steps), int64_t{p.trials}});
  }
  return t;
}

Table fit_table(const BootupFit& fit) {
  Table t{"fit", {"slope", "intercept", "r_squared", "points"}, {}};
  t.rows.push_back(
      {fit.slope, fit.intercept, fit.r_squared, static_cast<int64_t>(fit.points.size())});
  return t;
}

Metadata run_metadata(const SimParams& params, const RunOptions& options) {
  Metadata m = {
      {"n_lines", std::to_string(params.n_lines)},
      {"bias", format_number(params.bias)},
      {"p_s", format_number(params.p_s())},
      {"p_l", format_number(params.p_l())},
      {"p_m", format_number(params.p_m)},
      {"t_max", std::to_string(params.t_max)},
      {"seed", std::to_string(params.seed)},
      {"source_phasing",
       params.source_phasing == SourcePhasing::kStaggered ? "staggered" : "in_phase"},
      {"trials", std::to_string(options.trials)},
      {"record_cadence", std::to_string(options.record_cadence)},
      {"rng", "mt19937_64/seed_seq"},
  };
  if (params.has_overrides()) m.emplace_back("overrides", "true");
  return m;
}

void write_table(std::ostream& out, const Table& table, OutputFormat format,
                 const Metadata& metadata) {
  if (format == OutputFormat::kJson) {
    nlohmann::ordered_json doc;
    doc["schema"] = table.schema;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    doc["metadata"] = meta;
    doc["columns"] = table.columns;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json rec = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
      records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# schema=" << table.schema;
  for (const auto& [k, v] : metadata) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

}  // namespace perpetual
