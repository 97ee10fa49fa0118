// Copyright 2026 dynapitch authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynapitch/behaviors.hpp"
#include "dynapitch/bridge.hpp"
#include "dynapitch/field.hpp"
#include "dynapitch/kicker.hpp"
#include "dynapitch/kinematics.hpp"

namespace dynapitch::tac {

// Everything a run needs, with defaults that complete every scenario.
struct RunConfig {
  std::string scenario = "sprint";
  uint64_t seed = 0;
  double duration = 30.0;      // simulated-seconds cap
  double control_dt = 0.01;    // s per control tick
  double vision_rate_hz = 60.0;
  sim::FieldParams field;
  kin::WheelConfig wheels;
  kicker::KickerParams kicker;
  ctl::BridgeConfig bridge;
  Gains gains;
  MotionLimits limits;
  AimKickConfig aim;

  // Throws std::invalid_argument on inconsistent timing or bad scenario.
  void validate() const;
};

// Defaults tuned for the simulated drivetrain: the stock wheel config is
// geared for bench servos, so runs swap in a faster drive ratio that lets
// the chassis actually reach its 3 m/s envelope.
RunConfig default_run_config();

const std::vector<std::string>& scenario_names();

struct MetricsReport {
  std::string scenario;
  uint64_t seed = 0;
  double time_to_ball = 0.0;
  double sprint_time_4m = 0.0;
  double slalom_time = 0.0;
  double kick_distance = 0.0;
  uint64_t trace_hash = 0;
  double elapsed = 0.0;        // simulated time at exit
  bool out_of_bounds = false;
  bool failed = false;
};

std::string metrics_to_json(const MetricsReport& report);
std::string metrics_csv_header();
std::string metrics_to_csv_row(const MetricsReport& report);

// Canonical line-delimited trace with a running 64-bit FNV-1a digest.
// Records hash bit-identically whether or not a sink is attached.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* sink = nullptr) : sink_(sink) {}

  void record(const sim::WorldState& world, uint64_t tick);

  uint64_t hash() const { return hash_; }
  uint64_t lines() const { return lines_; }

 private:
  std::ostream* sink_;
  uint64_t hash_ = 14695981039346656037ULL;
  uint64_t lines_ = 0;
};

// Runs one scripted scenario to completion or to the duration cap.
// Wall-clock free; identical (config, seed) yields identical traces.
MetricsReport run_scenario(const RunConfig& cfg,
                           std::ostream* trace_sink = nullptr);

// Parses a JSON config body over the defaults. Unknown keys are errors.
RunConfig load_run_config(const std::string& json_text);

}  // namespace dynapitch::tac
