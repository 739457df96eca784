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

#include "perpetual/random.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using perpetual::RandomStream;

TEST(RandomStream, documented_construction) {
  const uint64_t seed = 0x0123456789abcdefULL, stream = 42;
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  std::mt19937_64 reference(seq);
  RandomStream r(seed, stream);
  for (int i = 0; i < 100; ++i) {
    const double expected = (static_cast<double>(reference() >> 11) + 1.0) * 0x1.0p-53;
    ASSERT_EQ(r.uniform(), expected);
  }
}

TEST(RandomStream, uniform_range) {
  RandomStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(RandomStream, streams_differ) {
  RandomStream a(5, 0), b(5, 1), c(6, 0);
  const double x = a.uniform();
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
}

TEST(RandomStream, geometric_edge_cases) {
  RandomStream r(2);
  EXPECT_EQ(r.geometric(0.0), RandomStream::kNever);
  EXPECT_EQ(r.geometric(1.0), 1);
  EXPECT_FALSE(r.bernoulli(0.0));
  EXPECT_TRUE(r.bernoulli(1.0));
}

TEST(RandomStream, geometric_matches_bernoulli_trials) {
  // P(G = k) = (1-p)^{k-1} p; compare the mean and P(G = 1).
  for (double p : {0.5, 0.1, 0.01}) {
    RandomStream r(3);
    const int n = 200000;
    double sum = 0.0;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      const int64_t g = r.geometric(p);
      ASSERT_GE(g, 1);
      sum += static_cast<double>(g);
      ones += g == 1;
    }
    const double mean = sum / n;
    const double sd_mean = std::sqrt((1 - p) / (p * p) / n);
    EXPECT_NEAR(mean, 1.0 / p, 5 * sd_mean) << p;
    EXPECT_NEAR(static_cast<double>(ones) / n, p, 5 * std::sqrt(p * (1 - p) / n)) << p;
  }
}
