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
#include <vector>

#include "dynapitch/field.hpp"
#include "dynapitch/kicker.hpp"
#include "dynapitch/kinematics.hpp"
#include "dynapitch/net_codec.hpp"

namespace dynapitch::ctl {

// Per-robot command filter standing between the wire and the servo bus:
// clamps, slew-limits, watches for stale input, and talks dxl frames.
struct BridgeConfig {
  double v_max = 3.0;              // m/s planar speed cap
  double omega_max = 10.0;         // rad/s
  double accel_max = 4.0;          // m/s^2 linear slew
  double angular_accel_max = 40.0; // rad/s^2
  double staleness_timeout = 0.2;  // s without commands before halt
  double kick_cap = 6.5;           // m/s delivered ball speed ceiling
  double control_dt = 0.01;        // s
};

struct BridgeState {
  kin::BodyTwist last_twist;       // post-filter
  double last_rx_time = -1e18;     // never received
  bool charger_enabled = false;
};

// Wire integers to SI, direction-preserving magnitude clamp, slew limit
// against the previous output. Updates last_twist and last_rx_time.
kin::BodyTwist filter_command(const net::RobotCommand& cmd,
                              BridgeState& state, const BridgeConfig& cfg,
                              double now);

// Zeroes motion and disables the charger once the stream has been silent
// strictly longer than the timeout. Returns the (possibly zeroed) twist.
kin::BodyTwist watchdog_check(BridgeState& state, const BridgeConfig& cfg,
                              double now);

struct SyncWriteFrame {
  std::vector<uint8_t> frame;
  bool saturated = false;  // some wheel demanded more than the unit limit
};

// Broadcast SYNC_WRITE of the four GoalVelocity registers realizing the
// twist. Byte-deterministic for equal inputs.
SyncWriteFrame command_to_sync_write(const kin::BodyTwist& twist,
                                     const kin::WheelConfig& wheel_cfg);

class Bridge {
 public:
  Bridge(uint8_t robot_id, const BridgeConfig& cfg,
         const kin::WheelConfig& wheels, const kicker::KickerParams& kicker);

  // Filters one inbound command addressed to this robot.
  void handle_command(const net::RobotCommand& cmd, double now);

  // One control tick: watchdog, SYNC_WRITE onto the robot's bus, kicker
  // charging, and a kick attempt when the latest command asks for one.
  // Bus faults surface as SimulationFault.
  void process_tick(sim::WorldState& world, const sim::FieldParams& field,
                    double now);

  uint8_t robot_id() const { return robot_id_; }
  const BridgeState& state() const { return state_; }
  uint64_t saturation_count() const { return saturation_count_; }

 private:
  uint8_t robot_id_;
  BridgeConfig cfg_;
  kin::WheelConfig wheels_;
  kicker::KickerParams kicker_;
  BridgeState state_;
  net::RobotCommand latest_cmd_;
  bool have_cmd_ = false;
  uint64_t saturation_count_ = 0;
};

}  // namespace dynapitch::ctl
