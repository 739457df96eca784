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

// Plot-ready output of Monte-Carlo results.
//
// Every result is first turned into a Table whose columns follow one of the
// fixed schemas below, then written as CSV (a `#` metadata line, the header,
// one record per line) or as a JSON object mirroring the same records.
//
//   timeseries   trial,t,computational,shunt,total
//   bias_sweep   N,B,t,mean_total,sd_total,ci95,trials
//   saturation   N,B,t,fraction_saturated,trials
//   bootup       N,B,bootup_steps,trials
//   fit          slope,intercept,r_squared,points
//
// Numbers are printed in their shortest round-trip form, so output is
// byte-identical across runs with the same inputs.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "perpetual/montecarlo.hpp"

namespace perpetual {

enum class OutputFormat { kCsv, kJson };

/// Empty cells (std::monostate) print as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, int64_t, double, std::string>;

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

Table timeseries_table(const std::vector<TrialResult>& trials);
Table bias_sweep_table(const std::vector<BiasPoint>& sweep);
Table saturation_table(const std::vector<SaturationPoint>& curve);
Table bootup_table(const std::vector<BootupPoint>& points);
Table fit_table(const BootupFit& fit);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// The effective parameters of a run, enough to reproduce it.
Metadata run_metadata(const SimParams& params, const RunOptions& options);

void write_table(std::ostream& out, const Table& table, OutputFormat format,
                 const Metadata& metadata);

}  // namespace perpetual
