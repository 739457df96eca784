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

#include "perpetual/network_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace perpetual {

namespace {

int mod(int64_t a, int m) {
  const int64_t r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

double SimParams::p_s() const {
  return p_s_override ? *p_s_override : 1.0 / (3.0 * static_cast<double>(n_lines));
}

double SimParams::p_l() const { return p_l_override ? *p_l_override : p_s() / bias; }

void SimParams::validate() const {
  if (n_lines < 2) throw std::invalid_argument("n_lines must be >= 2");
  if (n_lines % 2 != 0) throw std::invalid_argument("n_lines must be even");
  if (!(bias > 0.0)) throw std::invalid_argument("bias must be > 0");
  if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
  if (!valid_probability(p_m)) throw std::invalid_argument("p_m must lie in [0, 1]");
  if (!valid_probability(p_s())) throw std::invalid_argument("p_s must lie in [0, 1]");
  if (!valid_probability(p_l())) throw std::invalid_argument("p_L must lie in [0, 1]");
}

ScenarioAction switch_decision(RecycledInput recycled, bool shunt_occupied, bool source_ready) {
  ScenarioAction a;
  if (recycled == RecycledInput::kBelieved) {
    a.inject = Injection::kRecycled;
    a.shunt_hops_on = shunt_occupied;
    if (!source_ready) {
      a.scenario = shunt_occupied ? Scenario::kB : Scenario::kA;
    } else if (shunt_occupied) {
      a.scenario = Scenario::kE;
      a.source_terminated = true;
    } else {
      a.scenario = Scenario::kG;
      a.source_enters_shunt = true;
    }
    return a;
  }
  // Heralded loss, or a slot known to be empty.
  if (shunt_occupied) {
    a.inject = Injection::kShunt;
    a.scenario = source_ready ? Scenario::kD : Scenario::kC;
    a.source_enters_shunt = source_ready;
  } else if (source_ready) {
    a.inject = Injection::kSource;
    a.scenario = Scenario::kF;
  } else {
    a.inject = Injection::kNothing;
    a.scenario = Scenario::kEmpty;
  }
  return a;
}

char scenario_label(Scenario s) {
  switch (s) {
    case Scenario::kA: return 'a';
    case Scenario::kB: return 'b';
    case Scenario::kC: return 'c';
    case Scenario::kD: return 'd';
    case Scenario::kE: return 'e';
    case Scenario::kF: return 'f';
    case Scenario::kG: return 'g';
    case Scenario::kEmpty: break;
  }
  return '-';
}

double per_cycle_loss(double p_l) {
  if (!valid_probability(p_l)) throw std::invalid_argument("p_L must lie in [0, 1]");
  return -std::expm1(kCycleSteps * std::log1p(-p_l));
}

bool is_saturated(const Metrics& m, int n_lines) { return 2 * m.total_count > 9 * n_lines; }

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kLoss: return "loss";
    case EventKind::kHerald: return "herald";
    case EventKind::kInject: return "inject";
    case EventKind::kTerminate: return "terminate";
    case EventKind::kSourceSuccess: return "source_success";
  }
  return "?";
}

std::string format_event(const Event& e) {
  return std::to_string(e.t) + "," + std::to_string(e.line) + "," + to_string(e.kind) + "," +
         std::to_string(e.token_id);
}

Network::Network(SimParams params, uint64_t stream)
    : params_(std::move(params)),
      p_s_(params_.p_s()),
      p_l_(params_.p_l()),
      rng_(params_.seed, stream) {
  params_.validate();
  const int n = params_.n_lines;
  Line empty;
  empty.ring.fill(-1);
  empty.state.fill(RingSlotState::kEmpty);
  lines_.assign(static_cast<std::size_t>(n), empty);
  shunt_.assign(static_cast<std::size_t>(n), -1);

  for (int r = 0; r < kCycleSteps; ++r) {
    for (int i = 0; i < n; ++i) {
      if (injects_at(i, r)) inject_lines_[r].push_back(i);
      if (detects_at(i, r)) detect_lines_[r].push_back(i);
    }
  }
  for (int r = 0; r < kSourcePeriod; ++r) {
    for (int i = 0; i < n; ++i) {
      if (attempts_at(i, r)) source_lines_[r].push_back(i);
    }
  }
  attempts_left_ = rng_.geometric(p_s_);
}

bool Network::injects_at(int line, int64_t t) const {
  return mod(t - phase(line), period(line)) == 0;
}

bool Network::detects_at(int line, int64_t t) const {
  return injects_at(line, t - kDetectionOffset);
}

bool Network::attempts_at(int line, int64_t t) const {
  const int offset = params_.source_phasing == SourcePhasing::kStaggered ? line % kSourcePeriod : 0;
  return mod(t - offset, kSourcePeriod) == 0;
}

int Network::frame_of(int line, int64_t t) const { return mod(t - line, params_.n_lines); }

int Network::line_of_frame(int frame, int64_t t) const { return mod(t - frame, params_.n_lines); }

int Network::line_of(const Record& r, int64_t t) const {
  return r.place == Place::kShunt ? line_of_frame(r.where, t) : r.where;
}

void Network::emit(int64_t t, int line, EventKind kind, uint64_t id) const {
  if (sink_) sink_(Event{t, line, kind, id});
}

void Network::count_present(const Record& r, int64_t delta) {
  if (!r.token.actually_present) return;
  if (r.place == Place::kRing) {
    counters_.computational_count += delta;
  } else {
    counters_.shunt_count += delta;
  }
}

uint32_t Network::create_token(int line, int64_t t) {
  uint32_t index;
  if (!free_.empty()) {
    index = free_.back();
    free_.pop_back();
  } else {
    index = static_cast<uint32_t>(pool_.size());
    pool_.emplace_back();
  }
  Record& r = pool_[index];
  r.token = PhotonToken{next_id_++, true, t, 0};
  r.lost_at = -1;
  r.place = Place::kPending;
  r.where = line;
  r.live = true;
  count_present(r, +1);
  const int64_t lifetime = rng_.geometric(p_l_);
  if (lifetime != RandomStream::kNever) losses_.push({t + lifetime, index, r.token.id});
  return index;
}

void Network::release(uint32_t index) {
  pool_[index].live = false;
  free_.push_back(index);
}

void Network::destroy(uint32_t index, int line, int64_t t, Metrics& ev) {
  Record& r = pool_[index];
  if (r.token.actually_present) ++ev.terminations;
  count_present(r, -1);
  emit(t, line, EventKind::kTerminate, r.token.id);
  release(index);
}

void Network::detect(int line, int64_t t, Metrics& ev) {
  Line& l = lines_[static_cast<std::size_t>(line)];
  const int slot = mod(t - kDetectionOffset, kCycleSteps);
  const int32_t index = l.ring[slot];
  if (index < 0) return;
  Record& r = pool_[static_cast<uint32_t>(index)];

  // M1 reads the mode as it was at the end of the previous step; a loss
  // drawn for this step happened between the two modules.
  const bool lost_before_m1 = !r.token.actually_present && r.lost_at < t;
  ErrorFlags flags;
  flags.loss_after_m1 = !r.token.actually_present && r.lost_at == t;
  IncidentState incident = lost_before_m1 ? IncidentState::kVacuum : IncidentState::kPlusPhoton;
  if (params_.p_m > 0.0) {
    if (!lost_before_m1 && rng_.bernoulli(0.5)) incident = IncidentState::kMinusPhoton;
    flags.m1_error = rng_.bernoulli(params_.p_m);
    flags.m2_error = rng_.bernoulli(params_.p_m);
  }
  if (classify(simulate_double_measurement(incident, flags)) == Decision::kRecycle) return;

  ++ev.heralded_losses;
  emit(t, line, EventKind::kHerald, r.token.id);
  l.ring[slot] = -1;
  l.state[slot] = RingSlotState::kHeralded;
  if (r.token.actually_present) {
    // A measurement error removed a live photon.
    destroy(static_cast<uint32_t>(index), line, t, ev);
  } else {
    release(static_cast<uint32_t>(index));
  }
}

void Network::inject(int line, int64_t t, Metrics& ev) {
  Line& l = lines_[static_cast<std::size_t>(line)];
  const int slot = mod(t, kCycleSteps);
  const int frame = frame_of(line, t);
  int32_t& shunt = shunt_[static_cast<std::size_t>(frame)];
  const int32_t source = l.pending;
  l.pending = -1;

  RecycledInput recycled = RecycledInput::kNone;
  if (l.state[slot] == RingSlotState::kOccupied) {
    recycled = RecycledInput::kBelieved;
  } else if (l.state[slot] == RingSlotState::kHeralded) {
    recycled = RecycledInput::kHeraldedLoss;
  }
  const ScenarioAction action = switch_decision(recycled, shunt >= 0, source >= 0);
  ++scenario_counts_[static_cast<std::size_t>(action.scenario)];

  auto place_in_ring = [&](int32_t index) {
    Record& r = pool_[static_cast<uint32_t>(index)];
    count_present(r, -1);
    r.place = Place::kRing;
    r.where = line;
    count_present(r, +1);
    l.ring[slot] = index;
    l.state[slot] = RingSlotState::kOccupied;
    ++ev.injections;
    emit(t, line, EventKind::kInject, r.token.id);
  };

  switch (action.inject) {
    case Injection::kRecycled:
      ++pool_[static_cast<uint32_t>(l.ring[slot])].token.recycle_count;
      break;
    case Injection::kShunt:
      place_in_ring(shunt);
      shunt = -1;
      break;
    case Injection::kSource:
      place_in_ring(source);
      break;
    case Injection::kNothing:
      l.state[slot] = RingSlotState::kEmpty;
      break;
  }
  if (action.source_enters_shunt) {
    Record& r = pool_[static_cast<uint32_t>(source)];
    r.place = Place::kShunt;
    r.where = frame;
    shunt = source;
  } else if (action.source_terminated) {
    destroy(static_cast<uint32_t>(source), line, t, ev);
  }
}

void Network::route_idle_source(int line, int64_t t, Metrics& ev) {
  Line& l = lines_[static_cast<std::size_t>(line)];
  const int32_t source = l.pending;
  l.pending = -1;
  const int frame = frame_of(line, t);
  int32_t& shunt = shunt_[static_cast<std::size_t>(frame)];
  if (shunt < 0) {
    Record& r = pool_[static_cast<uint32_t>(source)];
    r.place = Place::kShunt;
    r.where = frame;
    shunt = source;
  } else {
    // The shunt slot passing this line is taken.
    destroy(static_cast<uint32_t>(source), line, t, ev);
  }
}

void Network::attempt_source(int line, int64_t t, Metrics& ev) {
  if (attempts_left_ == RandomStream::kNever) return;
  if (--attempts_left_ > 0) return;
  attempts_left_ = rng_.geometric(p_s_);
  const uint32_t index = create_token(line, t);
  lines_[static_cast<std::size_t>(line)].pending = static_cast<int32_t>(index);
  ++ev.source_successes;
  emit(t, line, EventKind::kSourceSuccess, pool_[index].token.id);
}

Metrics Network::step() {
  const int64_t t = clock_;
  Metrics ev;

  // (1) Loss trials scheduled for this step.
  while (!losses_.empty() && losses_.top().time <= t) {
    const ScheduledLoss loss = losses_.top();
    losses_.pop();
    Record& r = pool_[loss.index];
    if (!r.live || r.token.id != loss.id) continue;
    count_present(r, -1);
    r.token.actually_present = false;
    r.lost_at = t;
    ++ev.losses;
    emit(t, line_of(r, t), EventKind::kLoss, r.token.id);
  }

  // (2) Detection.
  for (int line : detect_lines_[static_cast<std::size_t>(mod(t, kCycleSteps))]) detect(line, t, ev);

  // (3) Injection switches, then confirmed source photons at lines without
  // an injection slot this step.
  for (int line : inject_lines_[static_cast<std::size_t>(mod(t, kCycleSteps))]) inject(line, t, ev);
  for (int line : pending_lines_) {
    if (lines_[static_cast<std::size_t>(line)].pending >= 0) route_idle_source(line, t, ev);
  }
  pending_lines_.clear();

  // (4) The shunt hop is implicit in the frame indexing.
  // (5) Sources.
  for (int line : source_lines_[static_cast<std::size_t>(mod(t, kSourcePeriod))]) {
    const int64_t before = ev.source_successes;
    attempt_source(line, t, ev);
    if (ev.source_successes != before) pending_lines_.push_back(line);
  }

  ++clock_;
  counters_.total_count = counters_.computational_count + counters_.shunt_count;
  counters_.losses = ev.losses;
  counters_.heralded_losses = ev.heralded_losses;
  counters_.injections = ev.injections;
  counters_.terminations = ev.terminations;
  counters_.source_successes = ev.source_successes;
  return counters_;
}

Metrics Network::photon_count() const {
  Metrics m;
  for (const Line& l : lines_) {
    for (int32_t index : l.ring) {
      if (index >= 0 && pool_[static_cast<uint32_t>(index)].token.actually_present) {
        ++m.computational_count;
      }
    }
    if (l.pending >= 0 && pool_[static_cast<uint32_t>(l.pending)].token.actually_present) {
      ++m.shunt_count;
    }
  }
  for (int32_t index : shunt_) {
    if (index >= 0 && pool_[static_cast<uint32_t>(index)].token.actually_present) ++m.shunt_count;
  }
  m.total_count = m.computational_count + m.shunt_count;
  return m;
}

RingSlotState Network::ring_state(int line, int slot) const {
  return lines_.at(static_cast<std::size_t>(line)).state.at(static_cast<std::size_t>(slot));
}

std::optional<PhotonToken> Network::ring_token(int line, int slot) const {
  const int32_t index =
      lines_.at(static_cast<std::size_t>(line)).ring.at(static_cast<std::size_t>(slot));
  if (index < 0) return std::nullopt;
  return pool_[static_cast<uint32_t>(index)].token;
}

std::optional<PhotonToken> Network::shunt_token(int line) const {
  const int32_t index = shunt_[static_cast<std::size_t>(frame_of(line, clock_))];
  if (index < 0) return std::nullopt;
  return pool_[static_cast<uint32_t>(index)].token;
}

std::optional<PhotonToken> Network::pending_token(int line) const {
  const int32_t index = lines_.at(static_cast<std::size_t>(line)).pending;
  if (index < 0) return std::nullopt;
  return pool_[static_cast<uint32_t>(index)].token;
}

}  // namespace perpetual
