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

#include "perpetual/loss_detection.hpp"

#include <algorithm>

namespace perpetual {

namespace {

Outcome flip(Outcome o) { return o == Outcome::kPlus ? Outcome::kMinus : Outcome::kPlus; }

}  // namespace

IncidentState phase_rotate(IncidentState state) {
  switch (state) {
    case IncidentState::kPlusPhoton:
      return IncidentState::kMinusPhoton;
    case IncidentState::kMinusPhoton:
      return IncidentState::kPlusPhoton;
    case IncidentState::kVacuum:
      break;
  }
  return IncidentState::kVacuum;
}

Outcome ideal_readout(IncidentState state) {
  return state == IncidentState::kMinusPhoton ? Outcome::kMinus : Outcome::kPlus;
}

OutcomePair simulate_double_measurement(IncidentState incident, const ErrorFlags& flags) {
  OutcomePair out;
  out.m1 = ideal_readout(incident);
  IncidentState second = phase_rotate(incident);
  if (flags.loss_after_m1) second = IncidentState::kVacuum;
  out.m2 = ideal_readout(second);
  if (flags.m1_error) out.m1 = flip(out.m1);
  if (flags.m2_error) out.m2 = flip(out.m2);
  return out;
}

Decision classify(const OutcomePair& outcomes) {
  return outcomes.m1 != outcomes.m2 ? Decision::kRecycle : Decision::kReplace;
}

std::array<OutcomePair, 4> outcome_patterns() {
  return {OutcomePair{Outcome::kPlus, Outcome::kPlus}, OutcomePair{Outcome::kPlus, Outcome::kMinus},
          OutcomePair{Outcome::kMinus, Outcome::kPlus},
          OutcomePair{Outcome::kMinus, Outcome::kMinus}};
}

std::vector<TableRow> enumerate_table() {
  std::vector<TableRow> rows;
  for (IncidentState incident :
       {IncidentState::kVacuum, IncidentState::kPlusPhoton, IncidentState::kMinusPhoton}) {
    for (int bits = 0; bits < 8; ++bits) {
      ErrorFlags flags{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
      // Losing an already-empty mode is not a distinct scenario.
      if (incident == IncidentState::kVacuum && flags.loss_after_m1) continue;
      rows.push_back({incident, flags, simulate_double_measurement(incident, flags)});
    }
  }
  const auto patterns = outcome_patterns();
  auto group_of = [&](const TableRow& r) {
    return std::find(patterns.begin(), patterns.end(), r.outcomes) - patterns.begin();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const TableRow& a, const TableRow& b) {
    if (group_of(a) != group_of(b)) return group_of(a) < group_of(b);
    return a.flags.count() < b.flags.count();
  });
  return rows;
}

std::string to_string(IncidentState state) {
  switch (state) {
    case IncidentState::kPlusPhoton:
      return "|+>";
    case IncidentState::kMinusPhoton:
      return "|->";
    case IncidentState::kVacuum:
      break;
  }
  return "|vac>";
}

std::string to_string(Outcome outcome) { return outcome == Outcome::kPlus ? "+" : "-"; }

std::string to_string(const OutcomePair& outcomes) {
  return "|" + to_string(outcomes.m1) + ">_M1|" + to_string(outcomes.m2) + ">_M2";
}

std::string to_string(Decision decision) {
  return decision == Decision::kRecycle ? "recycle" : "replace";
}

std::string describe(IncidentState incident, const ErrorFlags& flags) {
  std::string text = to_string(incident);
  if (flags.m1_error && flags.m2_error) {
    text += " & errors on M1 & M2";
  } else if (flags.m1_error) {
    text += " & error on M1";
  } else if (flags.m2_error) {
    text += " & error on M2";
  }
  if (flags.loss_after_m1) text += " & loss after M1";
  return text;
}

}  // namespace perpetual
