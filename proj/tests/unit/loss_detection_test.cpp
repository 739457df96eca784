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
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"

using namespace perpetual;

namespace {

constexpr auto kPlus = Outcome::kPlus;
constexpr auto kMinus = Outcome::kMinus;
constexpr auto kVac = IncidentState::kVacuum;
constexpr auto kP = IncidentState::kPlusPhoton;
constexpr auto kM = IncidentState::kMinusPhoton;

struct Row {
  IncidentState incident;
  ErrorFlags flags;
  OutcomePair outcomes;
};

// Reference detection table, written out row by row.
const std::vector<Row>& reference_table() {
  static const std::vector<Row> rows = {
      {kVac, {false, false, false}, {kPlus, kPlus}},
      {kP, {false, true, false}, {kPlus, kPlus}},
      {kM, {true, false, false}, {kPlus, kPlus}},
      {kP, {false, false, true}, {kPlus, kPlus}},
      {kM, {true, false, true}, {kPlus, kPlus}},

      {kP, {false, false, false}, {kPlus, kMinus}},
      {kM, {true, true, false}, {kPlus, kMinus}},
      {kVac, {false, true, false}, {kPlus, kMinus}},
      {kP, {false, true, true}, {kPlus, kMinus}},
      {kM, {true, true, true}, {kPlus, kMinus}},

      {kM, {false, false, false}, {kMinus, kPlus}},
      {kP, {true, true, false}, {kMinus, kPlus}},
      {kVac, {true, false, false}, {kMinus, kPlus}},
      {kP, {true, false, true}, {kMinus, kPlus}},
      {kM, {false, false, true}, {kMinus, kPlus}},

      {kM, {false, true, false}, {kMinus, kMinus}},
      {kP, {true, false, false}, {kMinus, kMinus}},
      {kVac, {true, true, false}, {kMinus, kMinus}},
      {kP, {true, true, true}, {kMinus, kMinus}},
      {kM, {false, true, true}, {kMinus, kMinus}},
  };
  return rows;
}

std::string key(IncidentState s, const ErrorFlags& f) {
  return to_string(s) + std::to_string(f.m1_error) + std::to_string(f.m2_error) +
         std::to_string(f.loss_after_m1);
}

}  // namespace

TEST(simulate_double_measurement, fault_free_readouts) {
  EXPECT_EQ(simulate_double_measurement(kVac, {}), (OutcomePair{kPlus, kPlus}));
  EXPECT_EQ(simulate_double_measurement(kP, {}), (OutcomePair{kPlus, kMinus}));
  EXPECT_EQ(simulate_double_measurement(kM, {}), (OutcomePair{kMinus, kPlus}));
}

TEST(simulate_double_measurement, faulty_readouts) {
  EXPECT_EQ(simulate_double_measurement(kM, {false, false, true}), (OutcomePair{kMinus, kPlus}));
  EXPECT_EQ(simulate_double_measurement(kM, {false, true, false}), (OutcomePair{kMinus, kMinus}));
}

TEST(simulate_double_measurement, reproduces_every_reference_row) {
  for (const Row& r : reference_table()) {
    EXPECT_EQ(simulate_double_measurement(r.incident, r.flags), r.outcomes)
        << describe(r.incident, r.flags);
  }
}

TEST(classify, decisions) {
  EXPECT_EQ(classify({kPlus, kMinus}), Decision::kRecycle);
  EXPECT_EQ(classify({kMinus, kPlus}), Decision::kRecycle);
  EXPECT_EQ(classify({kPlus, kPlus}), Decision::kReplace);
  EXPECT_EQ(classify({kMinus, kMinus}), Decision::kReplace);
}

TEST(enumerate_table, same_scenarios_as_reference_table) {
  const auto rows = enumerate_table();
  ASSERT_EQ(rows.size(), 20u);
  std::multiset<std::string> got, want;
  for (const auto& r : rows) got.insert(key(r.incident, r.flags) + to_string(r.outcomes));
  for (const auto& r : reference_table()) {
    want.insert(key(r.incident, r.flags) + to_string(r.outcomes));
  }
  EXPECT_EQ(got, want);
}

TEST(enumerate_table, five_rows_per_pattern_in_order) {
  const auto rows = enumerate_table();
  const auto patterns = outcome_patterns();
  for (std::size_t g = 0; g < 4; ++g) {
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(rows[5 * g + k].outcomes, patterns[g]);
  }
}

TEST(enumerate_table, fault_free_scenario_leads_its_group) {
  const auto rows = enumerate_table();
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(rows[5 * g].flags.count(), 0) << g;
  for (std::size_t k = 0; k < 5; ++k) EXPECT_GT(rows[15 + k].flags.count(), 0);
}

TEST(enumerate_table, lists_no_loss_after_an_empty_mode) {
  for (const auto& r : enumerate_table()) {
    EXPECT_FALSE(r.incident == kVac && r.flags.loss_after_m1);
  }
}

TEST(loss_detection_properties, fault_free_map_is_injective_and_sound) {
  std::set<std::pair<int, int>> images;
  for (IncidentState s : {kVac, kP, kM}) {
    const auto o = simulate_double_measurement(s, {});
    images.insert({static_cast<int>(o.m1), static_cast<int>(o.m2)});
  }
  EXPECT_EQ(images.size(), 3u);
  EXPECT_EQ(images.count({static_cast<int>(kMinus), static_cast<int>(kMinus)}), 0u);
  EXPECT_EQ(classify(simulate_double_measurement(kVac, {})), Decision::kReplace);
}

TEST(loss_detection_properties, single_fault_misclassifications) {
  // Truth: a photon is present after M2 unless the incident is vacuum or it
  // was lost after M1.
  int misclassified = 0;
  for (IncidentState s : {kVac, kP, kM}) {
    for (int bit = 0; bit < 3; ++bit) {
      ErrorFlags f{bit == 0, bit == 1, bit == 2};
      if (s == kVac && f.loss_after_m1) continue;
      const bool present = s != kVac && !f.loss_after_m1;
      const Decision d = classify(simulate_double_measurement(s, f));
      // Either a live photon is discarded or a vacuum is recycled.
      if (present != (d == Decision::kRecycle)) ++misclassified;
    }
  }
  EXPECT_GT(misclassified, 0);
  // Each single fault changes the decision at most once, so it causes at most
  // one discarded photon or one recycled vacuum: two correlated slot errors.
  for (IncidentState s : {kP, kM}) {
    for (int bit = 0; bit < 3; ++bit) {
      ErrorFlags f{bit == 0, bit == 1, bit == 2};
      const auto o = simulate_double_measurement(s, f);
      const auto clean = simulate_double_measurement(s, {});
      const int flipped = (o.m1 != clean.m1) + (o.m2 != clean.m2);
      EXPECT_LE(flipped, 1);
    }
  }
}

TEST(loss_detection_properties, rotation_is_an_involution) {
  EXPECT_EQ(phase_rotate(phase_rotate(kP)), kP);
  EXPECT_EQ(phase_rotate(phase_rotate(kM)), kM);
  EXPECT_EQ(phase_rotate(kP), kM);
  EXPECT_EQ(phase_rotate(kVac), kVac);
}

TEST(loss_detection_properties, replace_exactly_on_equal_readouts) {
  for (const auto& r : enumerate_table()) {
    EXPECT_EQ(classify(r.outcomes) == Decision::kReplace, r.outcomes.m1 == r.outcomes.m2);
  }
}

TEST(describe, scenario_text) {
  EXPECT_EQ(describe(kVac, {}), "|vac>");
  EXPECT_EQ(describe(kP, {false, true, true}), "|+> & error on M2 & loss after M1");
  EXPECT_EQ(describe(kM, {true, true, false}), "|-> & errors on M1 & M2");
  EXPECT_EQ(to_string(OutcomePair{kMinus, kPlus}), "|->_M1|+>_M2");
}
