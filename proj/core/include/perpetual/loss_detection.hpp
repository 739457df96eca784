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

// Double-measurement loss detection.
//
// Each recirculating photon is read twice by QND modules M1 and M2 with a
// single-photon phase rotation (|+> <-> |->) in between. Vacuum reads "+"
// on both modules, so equal outcomes herald a loss and the slot is refilled;
// differing outcomes mean the photon is assumed present and is recycled.

#pragma once

#include <array>
#include <string>
#include <vector>

namespace perpetual {

enum class IncidentState { kPlusPhoton, kMinusPhoton, kVacuum };

enum class Outcome { kPlus, kMinus };

struct ErrorFlags {
  bool m1_error = false;
  bool m2_error = false;
  bool loss_after_m1 = false;

  int count() const { return int{m1_error} + int{m2_error} + int{loss_after_m1}; }
  bool operator==(const ErrorFlags&) const = default;
};

struct OutcomePair {
  Outcome m1 = Outcome::kPlus;
  Outcome m2 = Outcome::kPlus;

  bool operator==(const OutcomePair&) const = default;
};

enum class Decision { kRecycle, kReplace };

/// The inter-measurement rotation. Vacuum is left alone.
IncidentState phase_rotate(IncidentState state);

/// Ideal X-basis readout of the module: vacuum and |+> both read "+".
Outcome ideal_readout(IncidentState state);

OutcomePair simulate_double_measurement(IncidentState incident, const ErrorFlags& flags);

Decision classify(const OutcomePair& outcomes);

struct TableRow {
  IncidentState incident;
  ErrorFlags flags;
  OutcomePair outcomes;
};

/// All 3 x 2^3 = 24 (incident, flags) combinations minus the four that
/// describe nothing physical (loss after M1 on an already-empty mode), i.e.
/// the 20 scenarios of the detection table. Rows are grouped by outcome
/// pattern in the order (+,+), (+,-), (-,+), (-,-); within a group rows are
/// ordered by the number of faults, so the fault-free scenario comes first.
std::vector<TableRow> enumerate_table();

/// The four outcome patterns in table order.
std::array<OutcomePair, 4> outcome_patterns();

std::string to_string(IncidentState state);
std::string to_string(Outcome outcome);
std::string to_string(const OutcomePair& outcomes);
std::string to_string(Decision decision);
/// Scenario text such as "|+> & error on M2 & loss after M1".
std::string describe(IncidentState incident, const ErrorFlags& flags);

}  // namespace perpetual
