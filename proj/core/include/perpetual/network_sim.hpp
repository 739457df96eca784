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

// Discrete-event model of one cross-section of the photon-recycling network.
//
// Time advances in synchronous steps of T (one photonic-module operation).
// Each of the N optical lines is a 12-slot recirculation ring: a photon
// injected at step t0 is read by the detection modules at t0 + 10 and comes
// back to the injection switch at t0 + 12. Even lines carry a photon every 2
// steps, odd lines every 4, and neighbouring lines are offset by one step, so
// line i injects at the steps t = i (mod period(i)).
//
// Freshly distilled photons ride the shunting network: a ring over the lines
// that moves a photon one line up per step, wrapping from the top line to
// line 0. A shunt photon at line i during step t is said to be in frame
// (t - i) mod N; the frame is invariant while it hops. A shunt photon only
// meets a switch when the line it passes has an injection slot that step,
// otherwise it hops on. Odd frames never meet a slot: a source photon that
// lands there circulates until it is lost.
//
// Each line's source attempts once every 3 steps. A success spends one step
// in its confirmation delay and then either takes part in that line's switch
// (when the line injects that step) or enters the shunt slot passing the
// line, and is terminated if that slot is taken.
//
// Every photon, wherever it is (confirmation delay, shunt, ring), faces one
// loss trial with probability p_L per step. The trials are realized as a
// geometric lifetime drawn when the photon is created, which is the same
// distribution as per-step Bernoulli sampling. A lost photon is not removed:
// it stays where it is as a ghost (believed present) until the detection
// modules herald it, or it is routed into a ring and heralded there.
//
// Random draws within a step happen in this order, lines ascending inside
// each phase: (1) detection outcome and error flags, only when p_m > 0;
// (2) source attempts, where each success draws the photon's loss lifetime
// and the next source skip count. Source attempts are consumed from a single
// geometric skip counter, so one draw covers a whole run of failures.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "perpetual/loss_detection.hpp"
#include "perpetual/random.hpp"

namespace perpetual {

inline constexpr int kCycleSteps = 12;
/// Steps from injection until the second detection module reads the photon.
inline constexpr int kDetectionOffset = 10;
inline constexpr int kSourcePeriod = 3;

enum class SourcePhasing {
  kStaggered,  // line i attempts at t = i (mod 3)
  kInPhase,    // every line attempts at t = 0 (mod 3)
};

struct SimParams {
  int n_lines = 8;
  double bias = 32.0;
  double p_m = 0.0;
  int64_t t_max = 2400;
  uint64_t seed = 1;
  SourcePhasing source_phasing = SourcePhasing::kStaggered;
  /// Experimental overrides of the derived probabilities.
  std::optional<double> p_s_override;
  std::optional<double> p_l_override;

  /// 1 / (3N) unless overridden.
  double p_s() const;
  /// p_s / B unless overridden.
  double p_l() const;
  /// 9N/2 computational slots.
  int capacity() const { return 9 * n_lines / 2; }
  bool has_overrides() const { return p_s_override.has_value() || p_l_override.has_value(); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PhotonToken {
  uint64_t id = 0;
  /// false once the photon has been lost; the token then is a ghost.
  bool actually_present = true;
  int64_t birth_time = 0;
  int recycle_count = 0;
};

/// What the injection switch of a line sees from the recirculation ring.
enum class RecycledInput {
  kBelieved,      // a photon (possibly an undetected ghost) is returning
  kHeraldedLoss,  // detection flagged the slot as lost
  kNone,          // slot known to be empty (never filled, or left empty)
};

enum class Scenario { kA, kB, kC, kD, kE, kF, kG, kEmpty };

enum class Injection { kNothing, kRecycled, kShunt, kSource };

struct ScenarioAction {
  Scenario scenario = Scenario::kEmpty;
  Injection inject = Injection::kNothing;
  /// The shunt photon stays in the shunt and hops to the next line.
  bool shunt_hops_on = false;
  bool source_enters_shunt = false;
  bool source_terminated = false;
};

/// Switching rule at a line's injection boundary. kNone is treated as a
/// heralded loss: the slot wants a photon.
ScenarioAction switch_decision(RecycledInput recycled, bool shunt_occupied, bool source_ready);

char scenario_label(Scenario s);

/// 1 - (1 - p_L)^12.
double per_cycle_loss(double p_l);

struct Metrics {
  int64_t computational_count = 0;
  int64_t shunt_count = 0;
  int64_t total_count = 0;
  // Events during the step that produced this record.
  int64_t losses = 0;
  int64_t heralded_losses = 0;
  int64_t injections = 0;
  int64_t terminations = 0;
  int64_t source_successes = 0;
};

/// total > 9N/2.
bool is_saturated(const Metrics& m, int n_lines);

enum class EventKind { kLoss, kHerald, kInject, kTerminate, kSourceSuccess };

struct Event {
  int64_t t = 0;
  int line = 0;
  EventKind kind = EventKind::kLoss;
  uint64_t token_id = 0;
};

using EventSink = std::function<void(const Event&)>;

const char* to_string(EventKind kind);
/// One `t,line,event,token_id` record, no newline.
std::string format_event(const Event& e);

enum class RingSlotState { kEmpty, kHeralded, kOccupied };

class Network {
 public:
  /// Empty network at clock 0. Trial k of a Monte-Carlo run passes
  /// stream = k to get an independent random substream.
  explicit Network(SimParams params, uint64_t stream = 0);

  /// Advances one step of T and returns the counts after it plus the events
  /// that happened during it.
  Metrics step();

  /// Counts recomputed by scanning every slot.
  Metrics photon_count() const;
  /// Incrementally maintained counts (event fields describe the last step).
  const Metrics& counters() const { return counters_; }
  bool is_saturated() const { return perpetual::is_saturated(counters_, params_.n_lines); }

  int64_t clock() const { return clock_; }
  const SimParams& params() const { return params_; }
  int n_lines() const { return params_.n_lines; }

  int period(int line) const { return line % 2 == 0 ? 2 : 4; }
  int phase(int line) const { return line % period(line); }
  bool injects_at(int line, int64_t t) const;
  bool detects_at(int line, int64_t t) const;
  bool attempts_at(int line, int64_t t) const;

  RingSlotState ring_state(int line, int slot) const;
  std::optional<PhotonToken> ring_token(int line, int slot) const;
  /// Shunt photon that sits at `line` during the next step.
  std::optional<PhotonToken> shunt_token(int line) const;
  /// Source photon in its confirmation delay at `line`.
  std::optional<PhotonToken> pending_token(int line) const;

  /// Scenario tallies, indexed by Scenario.
  const std::array<int64_t, 8>& scenario_counts() const { return scenario_counts_; }

  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }

 private:
  enum class Place : uint8_t { kPending, kShunt, kRing };

  struct Record {
    PhotonToken token;
    int64_t lost_at = -1;
    Place place = Place::kPending;
    int where = 0;  // line for pending/ring, frame for shunt
    bool live = false;
  };

  struct ScheduledLoss {
    int64_t time;
    uint32_t index;
    uint64_t id;
    bool operator>(const ScheduledLoss& o) const {
      return time != o.time ? time > o.time : id > o.id;
    }
  };

  struct Line {
    std::array<int32_t, kCycleSteps> ring;  // token index or -1
    std::array<RingSlotState, kCycleSteps> state;
    int32_t pending = -1;
  };

  int frame_of(int line, int64_t t) const;
  int line_of_frame(int frame, int64_t t) const;
  int line_of(const Record& r, int64_t t) const;

  uint32_t create_token(int line, int64_t t);
  void release(uint32_t index);
  void count_present(const Record& r, int64_t delta);
  void destroy(uint32_t index, int line, int64_t t, Metrics& ev);
  void emit(int64_t t, int line, EventKind kind, uint64_t id) const;

  void detect(int line, int64_t t, Metrics& ev);
  void inject(int line, int64_t t, Metrics& ev);
  void route_idle_source(int line, int64_t t, Metrics& ev);
  void attempt_source(int line, int64_t t, Metrics& ev);

  SimParams params_;
  double p_s_;
  double p_l_;
  RandomStream rng_;
  int64_t clock_ = 0;
  int64_t attempts_left_ = 0;
  uint64_t next_id_ = 1;

  std::vector<Line> lines_;
  std::vector<int32_t> shunt_;  // by frame
  std::vector<Record> pool_;
  std::vector<uint32_t> free_;
  std::priority_queue<ScheduledLoss, std::vector<ScheduledLoss>, std::greater<>> losses_;
  std::vector<int> pending_lines_;

  std::array<std::vector<int>, kCycleSteps> detect_lines_;
  std::array<std::vector<int>, kCycleSteps> inject_lines_;
  std::array<std::vector<int>, kSourcePeriod> source_lines_;

  Metrics counters_;
  std::array<int64_t, 8> scenario_counts_{};
  EventSink sink_;
};

}  // namespace perpetual
