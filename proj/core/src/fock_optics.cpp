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

#include "perpetual/fock_optics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace perpetual::fock {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Upper bound on sum_{n > n_max} e^{-a} a^n / n!. The ratio of consecutive
// terms past n_max is at most a / (n_max + 2), so the tail is bounded by a
// geometric series on its first term.
double poisson_tail_bound(double alpha_sq, int n_max) {
  if (alpha_sq == 0.0) return 0.0;
  const double n1 = n_max + 1.0;
  const double log_first = -alpha_sq + n1 * std::log(alpha_sq) - std::lgamma(n1 + 1.0);
  const double ratio = alpha_sq / (n1 + 1.0);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_first) / (1.0 - ratio);
}

}  // namespace

FockVector::FockVector(int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  amplitudes_.assign(static_cast<std::size_t>(n_max) + 1, Amplitude{});
  amplitudes_[0] = 1.0;
}

FockVector::FockVector(std::vector<Amplitude> amplitudes, double tail_bound)
    : amplitudes_(std::move(amplitudes)), tail_bound_(tail_bound) {
  if (amplitudes_.empty()) throw std::invalid_argument("FockVector needs at least |0>");
}

FockVector FockVector::number_state(int n, int n_max) {
  if (n < 0 || n > n_max) throw std::invalid_argument("photon number outside truncation");
  std::vector<Amplitude> amps(static_cast<std::size_t>(n_max) + 1);
  amps[static_cast<std::size_t>(n)] = 1.0;
  return FockVector(std::move(amps), 0.0);
}

double FockVector::squared_norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return sum;
}

Amplitude FockVector::inner(const FockVector& other) const {
  Amplitude sum{};
  const std::size_t n = std::min(amplitudes_.size(), other.amplitudes_.size());
  for (std::size_t i = 0; i < n; ++i) sum += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return sum;
}

std::optional<FockVector> FockVector::normalized() const {
  const double norm = std::sqrt(squared_norm());
  if (norm == 0.0) return std::nullopt;
  std::vector<Amplitude> amps(amplitudes_);
  for (auto& a : amps) a /= norm;
  return FockVector(std::move(amps), tail_bound_);
}

FockVector coherent_fock(double alpha_sq, int n_max, double tail_tol) {
  if (!(alpha_sq >= 0.0)) throw std::invalid_argument("alpha_sq must be >= 0");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const double tail = poisson_tail_bound(alpha_sq, n_max);
  if (!(tail < tail_tol)) {
    throw TruncationError("coherent state with alpha_sq=" + std::to_string(alpha_sq) +
                          " needs more than n_max=" + std::to_string(n_max) + " photons");
  }
  const double alpha = std::sqrt(alpha_sq);
  std::vector<Amplitude> amps(static_cast<std::size_t>(n_max) + 1);
  double c = std::exp(-alpha_sq / 2.0);
  amps[0] = c;
  for (int n = 1; n <= n_max; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    amps[static_cast<std::size_t>(n)] = c;
  }
  return *FockVector(std::move(amps), tail).normalized();
}

AtomFieldState AtomFieldState::prepare(const FockVector& field) {
  std::vector<Amplitude> amps(field.amplitudes().begin(), field.amplitudes().end());
  for (auto& a : amps) a *= kInvSqrt2;
  FockVector half(std::move(amps), field.tail_bound());
  return AtomFieldState(half, half);
}

AtomFieldState dispersive_evolve(const AtomFieldState& state, DispersivePhase phase) {
  const auto src = state.branch_g1().amplitudes();
  std::vector<Amplitude> g1(src.begin(), src.end());
  for (std::size_t n = 0; n < g1.size(); ++n) {
    g1[n] *= std::polar(1.0, 2.0 * phase.theta * static_cast<double>(n));
  }
  return AtomFieldState(FockVector(std::move(g1), state.branch_g1().tail_bound()),
                        state.branch_g2());
}

DistillationResult measure_atom_pm(const AtomFieldState& state) {
  const auto g1 = state.branch_g1().amplitudes();
  const auto g2 = state.branch_g2().amplitudes();
  std::vector<Amplitude> plus(g1.size()), minus(g1.size());
  for (std::size_t n = 0; n < g1.size(); ++n) {
    plus[n] = (g2[n] + g1[n]) * kInvSqrt2;
    minus[n] = (g2[n] - g1[n]) * kInvSqrt2;
  }
  const double tail = state.branch_g1().tail_bound();
  FockVector proj_plus(std::move(plus), tail);
  FockVector proj_minus(std::move(minus), tail);

  DistillationResult r;
  r.p_plus = proj_plus.squared_norm();
  r.p_minus = proj_minus.squared_norm();
  r.state_plus = proj_plus.normalized();
  r.state_minus = proj_minus.normalized();
  if (r.state_minus && r.state_minus->n_max() >= 1) r.fidelity_minus = r.state_minus->population(1);
  return r;
}

OutcomeProbabilities distill_probability(double alpha_sq) {
  if (!(alpha_sq >= 0.0)) throw std::invalid_argument("alpha_sq must be >= 0");
  // e^{-a} sinh(a) = (1 - e^{-2a}) / 2.
  const double p_minus = -std::expm1(-2.0 * alpha_sq) / 2.0;
  return {1.0 - p_minus, p_minus};
}

double distill_fidelity(double alpha_sq) {
  if (!(alpha_sq >= 0.0)) throw std::invalid_argument("alpha_sq must be >= 0");
  return 6.0 / (6.0 + alpha_sq * alpha_sq);
}

double distill_fidelity_exact(double alpha_sq) {
  if (!(alpha_sq >= 0.0)) throw std::invalid_argument("alpha_sq must be >= 0");
  if (alpha_sq == 0.0) return 1.0;
  return alpha_sq / std::sinh(alpha_sq);
}

PhotonQubit PhotonQubit::plus() { return {kInvSqrt2, kInvSqrt2}; }

PhotonQubit PhotonQubit::minus() { return {kInvSqrt2, -kInvSqrt2}; }

std::array<QndBranch, 2> x_basis_qnd(const PhotonQubit& photon) {
  // X swaps |0> and |1>.
  const Amplitude g1_0 = (photon.a0 + photon.a1) / 2.0;
  const Amplitude g1_1 = (photon.a1 + photon.a0) / 2.0;
  const Amplitude g2_0 = (photon.a0 - photon.a1) / 2.0;
  const Amplitude g2_1 = (photon.a1 - photon.a0) / 2.0;

  auto branch = [](XOutcome outcome, Amplitude c0, Amplitude c1) {
    const double p = std::norm(c0) + std::norm(c1);
    QndBranch b{outcome, p, std::nullopt};
    if (p > 0.0) {
      const double s = std::sqrt(p);
      b.projected = PhotonQubit{c0 / s, c1 / s};
    }
    return b;
  };
  return {branch(XOutcome::kPlus, g1_0, g1_1), branch(XOutcome::kMinus, g2_0, g2_1)};
}

QndBranch x_basis_qnd_sample(const PhotonQubit& photon, double u) {
  auto branches = x_basis_qnd(photon);
  return u <= branches[0].probability ? branches[0] : branches[1];
}

}  // namespace perpetual::fock
