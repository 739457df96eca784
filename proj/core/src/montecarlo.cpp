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

#include "perpetual/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace perpetual {

namespace {

// Runs one trial, calling on_sample at every recording time.
template <typename OnSample>
std::optional<int64_t> simulate(const SimParams& params, int trial, const std::vector<int64_t>& times,
                                OnSample&& on_sample) {
  Network net(params, static_cast<uint64_t>(trial));
  std::optional<int64_t> saturated_at;
  std::size_t next = 0;
  auto record = [&] {
    while (next < times.size() && times[next] == net.clock()) {
      on_sample(next, net.counters());
      ++next;
    }
  };
  record();
  while (net.clock() < params.t_max) {
    net.step();
    if (!saturated_at && net.is_saturated()) saturated_at = net.clock();
    record();
  }
  return saturated_at;
}

}  // namespace

void RunOptions::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (record_cadence < 1) throw std::invalid_argument("record_cadence must be >= 1");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

std::vector<int64_t> record_times(int64_t t_max, int64_t cadence) {
  std::vector<int64_t> times;
  for (int64_t t = 0; t < t_max; t += cadence) times.push_back(t);
  times.push_back(t_max);
  return times;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // Fall through to the hardware default.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  workers = std::min(resolve_workers(workers), std::max(count, 1));
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<TrialResult> run_trials(const SimParams& params, const RunOptions& options) {
  params.validate();
  options.validate();
  const auto times = record_times(params.t_max, options.record_cadence);
  std::vector<TrialResult> results(static_cast<std::size_t>(options.trials));
  parallel_for(options.trials, options.workers, [&](int k) {
    TrialResult& r = results[static_cast<std::size_t>(k)];
    r.params = params;
    r.trial = k;
    r.series.resize(times.size());
    r.saturated_at = simulate(params, k, times, [&](std::size_t i, const Metrics& m) {
      r.series[i] = CountSample{times[i], m.computational_count, m.shunt_count, m.total_count};
    });
  });
  return results;
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (s.count - 1));
    s.ci95 = 1.96 * s.sd / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

std::vector<BiasPoint> sweep_bias(const SimParams& base, const std::vector<double>& biases,
                                  const RunOptions& options) {
  options.validate();
  std::vector<BiasPoint> points;
  for (double b : biases) {
    SimParams p = base;
    p.bias = b;
    p.validate();
    std::vector<double> finals(static_cast<std::size_t>(options.trials));
    parallel_for(options.trials, options.workers, [&](int k) {
      Network net(p, static_cast<uint64_t>(k));
      while (net.clock() < p.t_max) net.step();
      finals[static_cast<std::size_t>(k)] = static_cast<double>(net.counters().total_count);
    });
    points.push_back(BiasPoint{p.n_lines, b, p.t_max, summarize(finals)});
  }
  return points;
}

std::vector<double> bias_grid(double first, double step, double last) {
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double b = first + step * k;
    if (b > last + 1e-9) break;
    grid.push_back(b);
  }
  return grid;
}

std::optional<ThresholdEstimate> threshold_crossing(const std::vector<BiasPoint>& sweep,
                                                    double level) {
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    const BiasPoint& lo = sweep[i];
    const BiasPoint& hi = sweep[i + 1];
    if (lo.total.mean <= level && hi.total.mean > level) {
      const double slope = (hi.total.mean - lo.total.mean) / (hi.bias - lo.bias);
      ThresholdEstimate e;
      e.bias = lo.bias + (level - lo.total.mean) / slope;
      e.ci_width = std::max(lo.total.ci95, hi.total.ci95) / slope;
      return e;
    }
  }
  return std::nullopt;
}

std::vector<SaturationPoint> saturation_fraction(const SimParams& params,
                                                 const RunOptions& options) {
  params.validate();
  options.validate();
  const auto times = record_times(params.t_max, options.record_cadence);
  // One byte per (trial, time) keeps the reduction in trial order.
  std::vector<std::vector<uint8_t>> flags(static_cast<std::size_t>(options.trials));
  parallel_for(options.trials, options.workers, [&](int k) {
    auto& f = flags[static_cast<std::size_t>(k)];
    f.assign(times.size(), 0);
    simulate(params, k, times, [&](std::size_t i, const Metrics& m) {
      f[i] = is_saturated(m, params.n_lines) ? 1 : 0;
    });
  });
  std::vector<SaturationPoint> curve;
  curve.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    int64_t saturated = 0;
    for (const auto& f : flags) saturated += f[i];
    curve.push_back(SaturationPoint{params.n_lines, params.bias, times[i],
                                    static_cast<double>(saturated) / options.trials,
                                    options.trials});
  }
  return curve;
}

std::optional<int64_t> bootup_time(const std::vector<SaturationPoint>& curve) {
  for (const SaturationPoint& p : curve) {
    if (p.fraction >= 0.5) return p.t;
  }
  return std::nullopt;
}

BootupPoint bootup_time(const SimParams& params, const RunOptions& options) {
  return BootupPoint{params.n_lines, params.bias, bootup_time(saturation_fraction(params, options)),
                     options.trials};
}

BootupFit fit_bootup_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("boot-up fit needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("boot-up fit needs at least two distinct N");
  BootupFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace perpetual
