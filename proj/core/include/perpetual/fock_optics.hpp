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

// Truncated Fock-space model of the photonic module.
//
// The module is an atom with ground states |g1>, |g2> coupled dispersively to
// a cavity mode (H = beta a^dag a sigma_z). A photon-number state |n> picks up
// the phase exp(2 i theta n) on |g1>, theta = beta * t. Tuning theta = pi/2
// turns the module into a photon-number parity meter, which is used both as
// a QND X-basis detector and to distill single photons from weak coherent
// light by post-selecting the odd-parity atom outcome.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace perpetual::fock {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxPhotons = 40;
inline constexpr double kDefaultTailTolerance = 1e-15;

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field state in the photon-number basis |0>..|n_max>.
class FockVector {
 public:
  /// Vacuum truncated at n_max.
  explicit FockVector(int n_max = 0);
  FockVector(std::vector<Amplitude> amplitudes, double tail_bound);

  static FockVector number_state(int n, int n_max);

  int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  Amplitude operator[](int n) const { return amplitudes_.at(static_cast<std::size_t>(n)); }

  /// Probability weight discarded by truncation (before renormalization).
  double tail_bound() const { return tail_bound_; }

  double squared_norm() const;
  /// Probability of n photons.
  double population(int n) const { return std::norm((*this)[n]); }
  Amplitude inner(const FockVector& other) const;

  /// Returns nullopt for the zero vector.
  std::optional<FockVector> normalized() const;

 private:
  std::vector<Amplitude> amplitudes_;
  double tail_bound_ = 0.0;
};

/// Real-alpha coherent state |alpha>, alpha = sqrt(alpha_sq), truncated at
/// n_max and renormalized. Throws TruncationError when the discarded tail
/// weight would reach tail_tol, std::invalid_argument for alpha_sq < 0.
FockVector coherent_fock(double alpha_sq, int n_max = kDefaultMaxPhotons,
                         double tail_tol = kDefaultTailTolerance);

/// Accumulated dispersive phase beta * t, in radians.
struct DispersivePhase {
  double theta = 0.0;

  /// theta = pi/2: a pi phase on |g1>|1>.
  static constexpr DispersivePhase parity() { return {std::numbers::pi / 2.0}; }
};

/// Joint atom (x) field state, stored as the two field branches multiplying
/// |g1> and |g2>. Only the module preparation (|g1>+|g2>)/sqrt(2) (x) field
/// is constructible from outside.
class AtomFieldState {
 public:
  static AtomFieldState prepare(const FockVector& field);

  const FockVector& branch_g1() const { return g1_; }
  const FockVector& branch_g2() const { return g2_; }
  double squared_norm() const { return g1_.squared_norm() + g2_.squared_norm(); }

 private:
  AtomFieldState(FockVector g1, FockVector g2) : g1_(std::move(g1)), g2_(std::move(g2)) {}

  FockVector g1_;
  FockVector g2_;

  friend AtomFieldState dispersive_evolve(const AtomFieldState&, DispersivePhase);
};

AtomFieldState dispersive_evolve(const AtomFieldState& state, DispersivePhase phase);

struct DistillationResult {
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// Normalized field state for each atom outcome; nullopt when that
  /// outcome has zero probability.
  std::optional<FockVector> state_plus;
  std::optional<FockVector> state_minus;
  /// |<1|state_minus>|^2, or 0 when state_minus is undefined.
  double fidelity_minus = 0.0;
};

/// Projects the atom onto |+-> = (|g2> +- |g1>)/sqrt(2).
DistillationResult measure_atom_pm(const AtomFieldState& state);

struct OutcomeProbabilities {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

/// Closed forms exp(-a) cosh(a) and exp(-a) sinh(a); the two sum to 1.
OutcomeProbabilities distill_probability(double alpha_sq);

/// 6 / (6 + alpha_sq^2), the fidelity of the four-term weak-pulse expansion.
double distill_fidelity(double alpha_sq);

/// Exact odd-parity fidelity of the full coherent state: a / sinh(a).
double distill_fidelity_exact(double alpha_sq);

/// Dual-rail or polarization photonic qubit a0|0> + a1|1>.
struct PhotonQubit {
  Amplitude a0{1.0, 0.0};
  Amplitude a1{0.0, 0.0};

  static PhotonQubit plus();
  static PhotonQubit minus();
  double squared_norm() const { return std::norm(a0) + std::norm(a1); }
};

enum class XOutcome { kPlus, kMinus };

struct QndBranch {
  XOutcome outcome;
  double probability;
  /// The surviving photon; nullopt when the branch has zero probability.
  std::optional<PhotonQubit> projected;
};

/// Single-photon use of the module: the atom, prepared in |+>_a, ends in
/// (psi + X psi)/2 |g1> + (psi - X psi)/2 |g2>. Reading |g1> leaves the photon
/// in |+>, reading |g2> leaves it in |->.
std::array<QndBranch, 2> x_basis_qnd(const PhotonQubit& photon);

/// Samples one branch using a uniform variate u in (0, 1].
QndBranch x_basis_qnd_sample(const PhotonQubit& photon, double u);

}  // namespace perpetual::fock
