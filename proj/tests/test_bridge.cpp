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

#include <cmath>
#include <random>

#include <doctest.h>

#include "dynapitch/packet.hpp"
#include "dynapitch/servo.hpp"

using namespace dynapitch;
using namespace dynapitch::ctl;

namespace {

net::RobotCommand command(int16_t vx, int16_t vy, int16_t omega,
                          uint16_t kick = 0, uint8_t flags = 0) {
  net::RobotCommand cmd;
  cmd.robot_id = 1;
  cmd.vx_mm_s = vx;
  cmd.vy_mm_s = vy;
  cmd.omega_mrad_s = omega;
  cmd.kick_mm_s = kick;
  cmd.flags = flags;
  return cmd;
}

}  // namespace

TEST_CASE("filter slews from rest one step at a time") {
  BridgeState state;
  const BridgeConfig cfg;

  const auto twist = filter_command(command(10000, 0, 0), state, cfg, 0.0);
  CHECK(twist.vx == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(twist.vy == 0.0);
  CHECK(twist.omega == 0.0);
  CHECK(state.last_twist.vx == twist.vx);
  CHECK(state.last_rx_time == 0.0);
}

TEST_CASE("filter converges to the direction-preserving clamp") {
  BridgeState state;
  const BridgeConfig cfg;

  double now = 0.0;
  for (int i = 0; i < 400; ++i) {
    filter_command(command(4000, 3000, 0), state, cfg, now);
    now += cfg.control_dt;
  }
  CHECK(state.last_twist.vx == doctest::Approx(3.0 * 0.8).epsilon(1e-9));
  CHECK(state.last_twist.vy == doctest::Approx(3.0 * 0.6).epsilon(1e-9));
  CHECK(std::hypot(state.last_twist.vx, state.last_twist.vy) ==
        doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("filter is idempotent for in-limit repeated commands") {
  BridgeState state;
  const BridgeConfig cfg;

  const auto first = filter_command(command(30, 0, 100), state, cfg, 0.0);
  const auto second = filter_command(command(30, 0, 100), state, cfg, 0.01);
  CHECK(first.vx == second.vx);
  CHECK(first.vy == second.vy);
  CHECK(first.omega == second.omega);
  CHECK(second.vx == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(second.omega == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("angular rate slews and clamps") {
  BridgeState state;
  const BridgeConfig cfg;

  const auto first = filter_command(command(0, 0, 20000), state, cfg, 0.0);
  CHECK(first.omega ==
        doctest::Approx(cfg.angular_accel_max * cfg.control_dt)
            .epsilon(1e-12));
  double now = 0.0;
  for (int i = 0; i < 100; ++i) {
    now += cfg.control_dt;
    filter_command(command(0, 0, 20000), state, cfg, now);
  }
  CHECK(state.last_twist.omega == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("watchdog boundary is strict") {
  const BridgeConfig cfg;

  BridgeState state;
  filter_command(command(30, 0, 0, 0, net::kFlagCharger), state, cfg, 0.0);
  REQUIRE(state.charger_enabled);

  auto twist = watchdog_check(state, cfg, 0.2);
  CHECK(twist.vx == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(state.charger_enabled);

  twist = watchdog_check(state, cfg, 0.2 + 1e-6);
  CHECK(twist.vx == 0.0);
  CHECK(twist.vy == 0.0);
  CHECK(twist.omega == 0.0);
  CHECK_FALSE(state.charger_enabled);

  // A bridge that never heard anything holds zero.
  BridgeState silent;
  twist = watchdog_check(silent, cfg, 0.0);
  CHECK(twist.vx == 0.0);
}

TEST_CASE("sync-write frame realizes a unit spin on stock gearing") {
  const kin::WheelConfig stock;  // gear ratio 1.5
  const auto sync = command_to_sync_write({0.0, 0.0, 1.0}, stock);
  CHECK_FALSE(sync.saturated);

  const auto decoded = dxl::decode_frame(sync.frame);
  REQUIRE(decoded.has_value());
  const auto& pkt = std::get<dxl::InstructionPacket>(*decoded);
  CHECK(pkt.target_id == dxl::kBroadcastId);
  CHECK(pkt.instruction == dxl::Instruction::SyncWrite);
  REQUIRE(pkt.params.size() == 4 + 4 * 5);
  CHECK(pkt.params[0] == (dxl::reg::kGoalVelocity & 0xFF));
  CHECK(pkt.params[1] == 0);
  CHECK(pkt.params[2] == 4);
  CHECK(pkt.params[3] == 0);
  for (int i = 0; i < 4; ++i) {
    const size_t base = 4 + i * 5;
    CHECK(pkt.params[base] == i + 1);
    const uint32_t raw = pkt.params[base + 1] |
                         (pkt.params[base + 2] << 8) |
                         (pkt.params[base + 3] << 16) |
                         (static_cast<uint32_t>(pkt.params[base + 4]) << 24);
    CHECK(static_cast<int32_t>(raw) == 82);
  }

  // Byte-deterministic.
  CHECK(command_to_sync_write({0.0, 0.0, 1.0}, stock).frame == sync.frame);
}

TEST_CASE("sync-write saturates gracefully on impossible twists") {
  const kin::WheelConfig stock;
  const auto sync = command_to_sync_write({3.0, 0.0, 0.0}, stock);
  CHECK(sync.saturated);

  const auto decoded = dxl::decode_frame(sync.frame);
  REQUIRE(decoded.has_value());
  const auto& pkt = std::get<dxl::InstructionPacket>(*decoded);
  for (int i = 0; i < 4; ++i) {
    const size_t base = 4 + i * 5;
    const uint32_t raw = pkt.params[base + 1] |
                         (pkt.params[base + 2] << 8) |
                         (pkt.params[base + 3] << 16) |
                         (static_cast<uint32_t>(pkt.params[base + 4]) << 24);
    CHECK(std::abs(static_cast<int32_t>(raw)) == 265);
  }
}

TEST_CASE("bridge writes filtered goals onto the robot bus") {
  kin::WheelConfig wheels;
  wheels.gear_ratio = 14.0;
  const BridgeConfig cfg;
  const kicker::KickerParams kparams;
  Bridge bridge(1, cfg, wheels, kparams);

  sim::WorldState world;
  world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
  const sim::FieldParams field;

  bridge.handle_command(command(1000, 0, 0), 0.0);
  bridge.process_tick(world, field, 0.0);

  const kin::WheelRates rates =
      kin::inverse(bridge.state().last_twist, wheels);
  for (uint8_t id = 1; id <= 4; ++id) {
    const int32_t expect = kin::to_dxl_units(rates.rates[id - 1]).units;
    CHECK(world.robots[0].bus.find(id)->reg_value(dxl::reg::kGoalVelocity) ==
          expect);
  }
  CHECK(bridge.state().last_twist.vx == doctest::Approx(0.04).epsilon(1e-12));

  // Commands aimed at other robots are ignored.
  auto other = command(2000, 0, 0);
  other.robot_id = 9;
  bridge.handle_command(other, 0.01);
  CHECK(bridge.state().last_rx_time == 0.0);
}

TEST_CASE("stale stream zeroes the goals and drops dribble") {
  kin::WheelConfig wheels;
  wheels.gear_ratio = 14.0;
  const BridgeConfig cfg;
  Bridge bridge(1, cfg, wheels, kicker::KickerParams{});

  sim::WorldState world;
  world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
  const sim::FieldParams field;

  bridge.handle_command(
      command(1000, 0, 0, 0, net::kFlagDribble | net::kFlagCharger), 0.0);
  bridge.process_tick(world, field, 0.0);
  CHECK(world.robots[0].dribble);

  for (int i = 1; i <= 25; ++i) {
    bridge.process_tick(world, field, i * cfg.control_dt);
  }
  CHECK(bridge.state().last_twist.vx == 0.0);
  CHECK_FALSE(bridge.state().charger_enabled);
  CHECK_FALSE(world.robots[0].dribble);
  for (uint8_t id = 1; id <= 4; ++id) {
    CHECK(world.robots[0].bus.find(id)->reg_value(dxl::reg::kGoalVelocity) ==
          0);
  }
}

TEST_CASE("charger flag drives capacitor charging at the control cadence") {
  kin::WheelConfig wheels;
  wheels.gear_ratio = 14.0;
  const BridgeConfig cfg;
  const kicker::KickerParams kparams;
  Bridge bridge(1, cfg, wheels, kparams);

  sim::WorldState world;
  world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
  const sim::FieldParams field;

  bridge.handle_command(command(0, 0, 0, 0, net::kFlagCharger), 0.0);
  bridge.process_tick(world, field, 0.0);
  const double per_tick =
      kparams.charge_current * cfg.control_dt / kparams.capacitance;
  CHECK(world.robots[0].kick.v_cap ==
        doctest::Approx(per_tick).epsilon(1e-12));

  bridge.handle_command(command(0, 0, 0, 0, net::kFlagCharger), 0.01);
  bridge.process_tick(world, field, 0.01);
  CHECK(world.robots[0].kick.v_cap ==
        doctest::Approx(2.0 * per_tick).epsilon(1e-12));
}

TEST_CASE("kick requests are capped and fed through the gate") {
  kin::WheelConfig wheels;
  wheels.gear_ratio = 14.0;
  const BridgeConfig cfg;
  const kicker::KickerParams kparams;

  SUBCASE("huge request delivers the kicker's own speed") {
    Bridge bridge(1, cfg, wheels, kparams);
    sim::WorldState world;
    world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
    world.robots[0].kick.v_cap = kparams.v_max;
    world.ball.pos = {0.12, 0.0};
    const sim::FieldParams field;

    bridge.handle_command(command(0, 0, 0, 20000), 0.0);
    bridge.process_tick(world, field, 0.0);
    CHECK(world.ball.vel.x ==
          doctest::Approx(5.876260271857).epsilon(1e-9));
  }

  SUBCASE("small request caps the delivered speed") {
    Bridge bridge(1, cfg, wheels, kparams);
    sim::WorldState world;
    world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
    world.robots[0].kick.v_cap = kparams.v_max;
    world.ball.pos = {0.12, 0.0};
    const sim::FieldParams field;

    bridge.handle_command(command(0, 0, 0, 3000), 0.0);
    bridge.process_tick(world, field, 0.0);
    CHECK(world.ball.vel.x == 3.0);
  }

  SUBCASE("no kick without a gated ball") {
    Bridge bridge(1, cfg, wheels, kparams);
    sim::WorldState world;
    world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
    world.robots[0].kick.v_cap = kparams.v_max;
    world.ball.pos = {1.0, 0.0};
    const sim::FieldParams field;

    bridge.handle_command(command(0, 0, 0, 6500), 0.0);
    bridge.process_tick(world, field, 0.0);
    CHECK(world.ball.vel.x == 0.0);
    CHECK(world.robots[0].kick.v_cap == kparams.v_max);
  }
}

TEST_CASE("fuzzed streams never escape the safety envelope") {
  const BridgeConfig cfg;
  std::mt19937_64 rng(1234);

  for (int run = 0; run < 200; ++run) {
    BridgeState state;
    double now = 0.0;
    for (int i = 0; i < 100; ++i) {
      net::RobotCommand cmd;
      cmd.robot_id = 1;
      cmd.vx_mm_s = static_cast<int16_t>(rng());
      cmd.vy_mm_s = static_cast<int16_t>(rng());
      cmd.omega_mrad_s = static_cast<int16_t>(rng());
      cmd.kick_mm_s = static_cast<uint16_t>(rng());
      cmd.flags = static_cast<uint8_t>(rng());
      now += (rng() % 50) * 0.001;  // bursts and gaps
      watchdog_check(state, cfg, now);
      filter_command(cmd, state, cfg, now);

      CHECK(std::hypot(state.last_twist.vx, state.last_twist.vy) <=
            cfg.v_max + 1e-9);
      CHECK(std::abs(state.last_twist.omega) <= cfg.omega_max + 1e-9);
    }
    // Silence beyond the timeout always forces a halt.
    watchdog_check(state, cfg, now + cfg.staleness_timeout + 0.001);
    CHECK(state.last_twist.vx == 0.0);
    CHECK(state.last_twist.vy == 0.0);
    CHECK(state.last_twist.omega == 0.0);
  }
}
