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

// Monte-Carlo trial runner and the statistics built on it.
//
// Trial k of a run simulates Network(params, stream = k), so every trial has
// its own deterministic substream and the results do not depend on how the
// trials are scheduled across workers. Aggregates are always reduced in
// trial-index order.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "perpetual/network_sim.hpp"

namespace perpetual {

inline constexpr int64_t kDefaultRecordCadence = kCycleSteps;
inline constexpr int kDefaultTrials = 1000;
inline constexpr int kDefaultSaturationTrials = 3000;

/// Environment variable that overrides the worker count.
inline constexpr const char* kWorkersEnv = "PERPETUAL_WORKERS";

struct RunOptions {
  int trials = kDefaultTrials;
  /// Counts are recorded at t = 0, cadence, 2 cadence, ... and at t_max.
  int64_t record_cadence = kDefaultRecordCadence;
  /// 0 picks kWorkersEnv, then the hardware concurrency.
  int workers = 0;

  void validate() const;
};

struct CountSample {
  int64_t t = 0;
  int64_t computational = 0;
  int64_t shunt = 0;
  int64_t total = 0;
};

struct TrialResult {
  SimParams params;
  int trial = 0;
  std::vector<CountSample> series;
  /// First step t (counting completed steps) with total > 9N/2.
  std::optional<int64_t> saturated_at;
};

/// Recording times for a run of t_max steps.
std::vector<int64_t> record_times(int64_t t_max, int64_t cadence);

/// Effective worker count for a request (0 = automatic).
int resolve_workers(int requested);

/// Runs body(k) for k in [0, count) on `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

std::vector<TrialResult> run_trials(const SimParams& params, const RunOptions& options);

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
  /// Half width of the normal-approximation 95% interval of the mean.
  double ci95 = 0.0;
  int count = 0;
};

/// Sample mean, sample standard deviation and 1.96 sd / sqrt(n).
SummaryStats summarize(const std::vector<double>& values);

struct BiasPoint {
  int n_lines = 0;
  double bias = 0.0;
  int64_t t = 0;
  SummaryStats total;
};

/// Final-time total photon count for each bias value.
std::vector<BiasPoint> sweep_bias(const SimParams& base, const std::vector<double>& biases,
                                  const RunOptions& options);

/// The grid 2, 12, 22, ..., up to and including `last` when it lies on it.
std::vector<double> bias_grid(double first = 2.0, double step = 10.0, double last = 192.0);

struct ThresholdEstimate {
  /// Bias at which the mean total first rises above the level, by linear
  /// interpolation between adjacent sweep points.
  double bias = 0.0;
  /// Uncertainty of `bias`: the larger ci95 of the bracketing points divided
  /// by the local slope of the curve.
  double ci_width = 0.0;
};

std::optional<ThresholdEstimate> threshold_crossing(const std::vector<BiasPoint>& sweep,
                                                    double level);

struct SaturationPoint {
  int n_lines = 0;
  double bias = 0.0;
  int64_t t = 0;
  double fraction = 0.0;
  int trials = 0;
};

/// Fraction of trials with total > 9N/2 at each recording time.
std::vector<SaturationPoint> saturation_fraction(const SimParams& params,
                                                 const RunOptions& options);

struct BootupPoint {
  int n_lines = 0;
  double bias = 0.0;
  /// nullopt: fewer than half of the trials were saturated at any recording
  /// time up to t_max.
  std::optional<int64_t> steps;
  int trials = 0;
};

/// First recording time at which at least half of the trials are saturated.
std::optional<int64_t> bootup_time(const std::vector<SaturationPoint>& curve);
BootupPoint bootup_time(const SimParams& params, const RunOptions& options);

struct BootupFit {
  std::vector<std::pair<double, double>> points;  // (N, boot-up steps)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of boot-up steps on N. Throws std::invalid_argument
/// for fewer than 3 points or when every N is equal.
BootupFit fit_bootup_scaling(const std::vector<std::pair<double, double>>& points);

}  // namespace perpetual
