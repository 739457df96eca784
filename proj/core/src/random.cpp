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

namespace perpetual {

namespace {

std::mt19937_64 seeded_engine(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(uint64_t seed, uint64_t stream) : engine_(seeded_engine(seed, stream)) {}

double RandomStream::uniform() {
  // (k + 1) / 2^53 for k in [0, 2^53): never zero, may be exactly one.
  constexpr double kScale = 1.0 / 9007199254740992.0;
  return static_cast<double>((engine_() >> 11) + 1) * kScale;
}

bool RandomStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() <= p;
}

int64_t RandomStream::geometric(double p) {
  if (p <= 0.0) return kNever;
  if (p >= 1.0) return 1;
  const double u = uniform();
  const double k = std::floor(std::log(u) / std::log1p(-p));
  if (!(k < 9.0e18)) return kNever;
  return static_cast<int64_t>(k) + 1;
}

}  // namespace perpetual
