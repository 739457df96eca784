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
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "gtest/gtest.h"

using namespace perpetual;

namespace {

SimParams small(double bias, int64_t t_max) {
  SimParams p;
  p.n_lines = 8;
  p.bias = bias;
  p.t_max = t_max;
  p.seed = 17;
  return p;
}

RunOptions opts(int trials, int workers = 1) {
  RunOptions o;
  o.trials = trials;
  o.workers = workers;
  return o;
}

}  // namespace

TEST(record_times, cadence_and_final_time) {
  EXPECT_EQ(record_times(30, 12), (std::vector<int64_t>{0, 12, 24, 30}));
  EXPECT_EQ(record_times(24, 12), (std::vector<int64_t>{0, 12, 24}));
  EXPECT_EQ(record_times(0, 12), (std::vector<int64_t>{0}));
}

TEST(run_trials, series_shape_and_consistency) {
  const auto results = run_trials(small(32, 500), opts(5));
  ASSERT_EQ(results.size(), 5u);
  for (const auto& r : results) {
    EXPECT_EQ(r.series.front().t, 0);
    EXPECT_EQ(r.series.back().t, 500);
    for (std::size_t i = 1; i < r.series.size(); ++i) {
      EXPECT_LT(r.series[i - 1].t, r.series[i].t);
    }
    for (const auto& s : r.series) {
      EXPECT_EQ(s.total, s.computational + s.shunt);
      EXPECT_LE(s.computational, 36);
      // Any recorded saturated sample implies an earlier-or-equal first crossing.
      if (2 * s.total > 9 * 8) {
        ASSERT_TRUE(r.saturated_at.has_value());
        EXPECT_LE(*r.saturated_at, s.t);
      }
    }
  }
}

TEST(run_trials, deterministic_fill_curve) {
  SimParams p = small(1, 400);
  p.p_s_override = 1.0;
  p.p_l_override = 0.0;
  const auto a = run_trials(p, opts(1));
  p.seed = 12345;
  const auto b = run_trials(p, opts(1));
  ASSERT_EQ(a[0].series.size(), b[0].series.size());
  for (std::size_t i = 0; i < a[0].series.size(); ++i) {
    EXPECT_EQ(a[0].series[i].total, b[0].series[i].total);
  }
  EXPECT_EQ(a[0].series.back().computational, 36);
  EXPECT_TRUE(a[0].saturated_at.has_value());
}

TEST(run_trials, independent_of_worker_count) {
  const auto serial = run_trials(small(32, 600), opts(9, 1));
  const auto parallel = run_trials(small(32, 600), opts(9, 4));
  for (int k = 0; k < 9; ++k) {
    ASSERT_EQ(serial[k].series.size(), parallel[k].series.size());
    for (std::size_t i = 0; i < serial[k].series.size(); ++i) {
      EXPECT_EQ(serial[k].series[i].total, parallel[k].series[i].total);
    }
    EXPECT_EQ(serial[k].saturated_at, parallel[k].saturated_at);
  }
}

TEST(run_trials, trial_k_is_its_own_substream) {
  // Trial 3 of a 5-trial run equals trial 3 of a 4-trial run.
  const auto five = run_trials(small(16, 300), opts(5));
  const auto four = run_trials(small(16, 300), opts(4));
  for (std::size_t i = 0; i < five[3].series.size(); ++i) {
    EXPECT_EQ(five[3].series[i].total, four[3].series[i].total);
  }
}

TEST(run_trials, rejects_bad_options) {
  EXPECT_THROW(run_trials(small(32, 10), opts(0)), std::invalid_argument);
  RunOptions o = opts(1);
  o.record_cadence = 0;
  EXPECT_THROW(run_trials(small(32, 10), o), std::invalid_argument);
}

TEST(summarize, sample_statistics) {
  const SummaryStats s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sd, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.ci95, 1.96 * std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(s.count, 4);
  EXPECT_EQ(summarize({7.0}).sd, 0.0);
}

TEST(summarize, order_independent) {
  std::vector<double> v = {3, 1, 4, 1, 5, 9, 2, 6};
  const auto a = summarize(v);
  std::reverse(v.begin(), v.end());
  const auto b = summarize(v);
  EXPECT_DOUBLE_EQ(a.mean, b.mean);
  EXPECT_NEAR(a.sd, b.sd, 1e-15);
}

TEST(bias_grid, default_grid) {
  const auto g = bias_grid();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_EQ(g.front(), 2.0);
  EXPECT_EQ(g[1], 12.0);
  EXPECT_EQ(g.back(), 192.0);
}

TEST(sweep_bias, low_bias_stays_empty_and_reproducible) {
  const auto a = sweep_bias(small(1, 1200), {2, 64}, opts(40));
  const auto b = sweep_bias(small(1, 1200), {2, 64}, opts(40, 3));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_LT(a[0].total.mean, a[1].total.mean);
  EXPECT_LT(a[0].total.mean, 0.5 * 36);
  EXPECT_EQ(a[0].total.mean, b[0].total.mean);
  EXPECT_EQ(a[1].total.sd, b[1].total.sd);
  EXPECT_EQ(a[1].t, 1200);
}

TEST(sweep_bias, mean_total_non_decreasing_in_bias) {
  const auto sweep = sweep_bias(small(1, 2400), {2, 12, 22, 32, 42}, opts(100));
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double slack = 2 * (sweep[i].total.ci95 + sweep[i - 1].total.ci95);
    EXPECT_GE(sweep[i].total.mean + slack, sweep[i - 1].total.mean) << sweep[i].bias;
  }
}

TEST(threshold_crossing, interpolates_between_points) {
  std::vector<BiasPoint> sweep = {
      {40, 10, 0, {100, 10, 2, 100}},
      {40, 20, 0, {160, 10, 4, 100}},
      {40, 30, 0, {200, 10, 2, 100}},
  };
  const auto e = threshold_crossing(sweep, 180);
  ASSERT_TRUE(e.has_value());
  EXPECT_DOUBLE_EQ(e->bias, 25.0);
  EXPECT_DOUBLE_EQ(e->ci_width, 4.0 / 4.0);
  EXPECT_FALSE(threshold_crossing(sweep, 500).has_value());
}

TEST(saturation_fraction, starts_at_zero_and_counts_trials) {
  SimParams p = small(1, 240);
  p.p_s_override = 1.0;
  p.p_l_override = 0.0;
  const auto curve = saturation_fraction(p, opts(3));
  ASSERT_FALSE(curve.empty());
  EXPECT_EQ(curve.front().t, 0);
  EXPECT_EQ(curve.front().fraction, 0.0);
  EXPECT_EQ(curve.back().fraction, 1.0);
  EXPECT_EQ(curve.back().trials, 3);
}

TEST(bootup_time, deterministic_fill_time) {
  SimParams p = small(1, 600);
  p.p_s_override = 1.0;
  p.p_l_override = 0.0;
  RunOptions o = opts(1);
  o.record_cadence = 1;
  const auto trial = run_trials(p, o);
  const auto boot = bootup_time(p, o);
  ASSERT_TRUE(boot.steps.has_value());
  EXPECT_EQ(*boot.steps, *trial[0].saturated_at);
}

TEST(bootup_time, reports_missing_boot) {
  const auto boot = bootup_time(small(0.5, 240), opts(4));
  EXPECT_FALSE(boot.steps.has_value());
  EXPECT_EQ(boot.trials, 4);
}

TEST(bootup_time, first_time_at_half) {
  std::vector<SaturationPoint> curve = {{8, 32, 0, 0.0, 10}, {8, 32, 12, 0.4, 10},
                                        {8, 32, 24, 0.5, 10}, {8, 32, 36, 0.3, 10}};
  EXPECT_EQ(bootup_time(curve), 24);
}

TEST(fit_bootup_scaling, exact_line) {
  const auto fit = fit_bootup_scaling({{8, 900}, {24, 2500}, {40, 4100}, {56, 5700}});
  EXPECT_NEAR(fit.slope, 100.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 100.0, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-15);
}

TEST(fit_bootup_scaling, noisy_line) {
  const auto fit = fit_bootup_scaling({{1, 1}, {2, 3}, {3, 2}, {4, 5}});
  EXPECT_NEAR(fit.slope, 1.1, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_GT(fit.r_squared, 0.0);
  EXPECT_LT(fit.r_squared, 1.0);
}

TEST(fit_bootup_scaling, rejects_degenerate_input) {
  EXPECT_THROW(fit_bootup_scaling({{8, 1}, {24, 2}}), std::invalid_argument);
  EXPECT_THROW(fit_bootup_scaling({{8, 1}, {8, 2}, {8, 3}}), std::invalid_argument);
}

TEST(resolve_workers, environment_override) {
  EXPECT_EQ(resolve_workers(3), 3);
  setenv(kWorkersEnv, "2", 1);
  EXPECT_EQ(resolve_workers(0), 2);
  setenv(kWorkersEnv, "junk", 1);
  EXPECT_GE(resolve_workers(0), 1);
  unsetenv(kWorkersEnv);
}

TEST(parallel_for, visits_every_index_once) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int k) { ++hits[k]; });
  EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), 100);
  EXPECT_EQ(*std::max_element(hits.begin(), hits.end()), 1);
  EXPECT_THROW(parallel_for(10, 3, [](int k) { if (k == 5) throw std::runtime_error("x"); }),
               std::runtime_error);
}
