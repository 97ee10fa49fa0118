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

#include "dynapitch/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "dynapitch/packet.hpp"
#include "dynapitch/servo.hpp"

namespace dynapitch::ctl {
namespace {

double clamp_abs(double v, double limit) {
  return std::clamp(v, -limit, limit);
}

}  // namespace

kin::BodyTwist filter_command(const net::RobotCommand& cmd,
                              BridgeState& state, const BridgeConfig& cfg,
                              double now) {
  double vx = cmd.vx_mm_s / 1000.0;
  double vy = cmd.vy_mm_s / 1000.0;
  double omega = cmd.omega_mrad_s / 1000.0;

  const double speed = std::hypot(vx, vy);
  if (speed > cfg.v_max) {
    const double scale = cfg.v_max / speed;
    vx *= scale;
    vy *= scale;
  }
  omega = clamp_abs(omega, cfg.omega_max);

  const double dv_max = cfg.accel_max * cfg.control_dt;
  const double dvx = vx - state.last_twist.vx;
  const double dvy = vy - state.last_twist.vy;
  const double dv = std::hypot(dvx, dvy);
  if (dv > dv_max) {
    const double scale = dv_max / dv;
    vx = state.last_twist.vx + dvx * scale;
    vy = state.last_twist.vy + dvy * scale;
  }
  const double domega_max = cfg.angular_accel_max * cfg.control_dt;
  omega = state.last_twist.omega +
          clamp_abs(omega - state.last_twist.omega, domega_max);

  state.last_twist = {vx, vy, omega};
  state.last_rx_time = now;
  state.charger_enabled = (cmd.flags & net::kFlagCharger) != 0;
  return state.last_twist;
}

kin::BodyTwist watchdog_check(BridgeState& state, const BridgeConfig& cfg,
                              double now) {
  if (now - state.last_rx_time > cfg.staleness_timeout) {
    state.last_twist = {0.0, 0.0, 0.0};
    state.charger_enabled = false;
  }
  return state.last_twist;
}

SyncWriteFrame command_to_sync_write(const kin::BodyTwist& twist,
                                     const kin::WheelConfig& wheel_cfg) {
  const kin::WheelRates rates = kin::inverse(twist, wheel_cfg);
  SyncWriteFrame out;

  std::vector<uint8_t> params;
  params.push_back(dxl::reg::kGoalVelocity & 0xFF);
  params.push_back((dxl::reg::kGoalVelocity >> 8) & 0xFF);
  params.push_back(4);
  params.push_back(0);
  for (int i = 0; i < 4; ++i) {
    const kin::DxlUnits u = kin::to_dxl_units(rates.rates[i]);
    out.saturated = out.saturated || u.saturated;
    params.push_back(static_cast<uint8_t>(i + 1));
    const auto raw = static_cast<uint32_t>(u.units);
    params.push_back(raw & 0xFF);
    params.push_back((raw >> 8) & 0xFF);
    params.push_back((raw >> 16) & 0xFF);
    params.push_back((raw >> 24) & 0xFF);
  }

  dxl::InstructionPacket packet{dxl::kBroadcastId, dxl::Instruction::SyncWrite,
                                std::move(params)};
  out.frame = dxl::encode_instruction(packet);
  return out;
}

Bridge::Bridge(uint8_t robot_id, const BridgeConfig& cfg,
               const kin::WheelConfig& wheels,
               const kicker::KickerParams& kicker)
    : robot_id_(robot_id), cfg_(cfg), wheels_(wheels), kicker_(kicker) {}

void Bridge::handle_command(const net::RobotCommand& cmd, double now) {
  if (cmd.robot_id != robot_id_) {
    return;
  }
  filter_command(cmd, state_, cfg_, now);
  latest_cmd_ = cmd;
  have_cmd_ = true;
}

void Bridge::process_tick(sim::WorldState& world,
                          const sim::FieldParams& field, double now) {
  sim::Robot& robot = sim::find_robot(world, robot_id_);
  const kin::BodyTwist twist = watchdog_check(state_, cfg_, now);
  const bool stale = now - state_.last_rx_time > cfg_.staleness_timeout;

  const SyncWriteFrame sync = command_to_sync_write(twist, wheels_);
  if (sync.saturated) {
    ++saturation_count_;
  }
  robot.bus.transact(sync.frame);
  if (robot.bus.fault()) {
    throw sim::SimulationFault("servo bus rejected a goal frame");
  }

  robot.kick.charging = state_.charger_enabled;
  robot.kick = kicker::charge_step(robot.kick, kicker_, now, cfg_.control_dt);

  robot.dribble =
      have_cmd_ && !stale && (latest_cmd_.flags & net::kFlagDribble) != 0;
  robot.last_command_time = state_.last_rx_time;

  if (have_cmd_ && !stale && latest_cmd_.kick_mm_s > 0) {
    const double requested =
        std::min(latest_cmd_.kick_mm_s / 1000.0, cfg_.kick_cap);
    sim::attempt_kick(world, field, kicker_, robot_id_, requested);
  }
}

}  // namespace dynapitch::ctl
