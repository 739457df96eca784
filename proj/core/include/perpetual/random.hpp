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

#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace perpetual {

/// Deterministic random stream used by the simulator.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard) seeded through std::seed_seq with the four 32-bit words
/// {seed_lo, seed_hi, stream_lo, stream_hi}. Uniform variates take the top
/// 53 bits of one engine output. Geometric variates use inversion on a single
/// uniform. Any implementation following these three rules reproduces the
/// same event sequence.
class RandomStream {
 public:
  static constexpr int64_t kNever = std::numeric_limits<int64_t>::max();

  explicit RandomStream(uint64_t seed, uint64_t stream = 0);

  /// Uniform on (0, 1].
  double uniform();

  bool bernoulli(double p);

  /// Number of independent Bernoulli(p) trials up to and including the
  /// first success; always >= 1. Returns kNever when p == 0.
  int64_t geometric(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace perpetual
