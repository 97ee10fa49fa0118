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
//
// Release gate: one line of output per criterion, PASS or FAIL, exit 0 only
// when everything passes. Deliberately self-contained and paranoid.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "dynapitch/bridge.hpp"
#include "dynapitch/crc16.hpp"
#include "dynapitch/field.hpp"
#include "dynapitch/kicker.hpp"
#include "dynapitch/kinematics.hpp"
#include "dynapitch/net_codec.hpp"
#include "dynapitch/packet.hpp"
#include "dynapitch/scenario.hpp"
#include "dynapitch/servo.hpp"
#include "dynapitch/stream_parser.hpp"

using namespace dynapitch;

namespace {

int g_failures = 0;

void report(int n, const char* what, bool ok) {
  std::printf("criterion %d: %-58s %s\n", n, what, ok ? "PASS" : "FAIL");
  if (!ok) ++g_failures;
}

uint8_t biased_byte(std::mt19937_64& rng) {
  // Half the payload bytes come from the preamble alphabet to stress
  // stuffing.
  switch (rng() % 4) {
    case 0:
      return 0xFF;
    case 1:
      return 0xFD;
    default:
      return static_cast<uint8_t>(rng());
  }
}

dxl::AnyPacket random_packet(std::mt19937_64& rng) {
  std::vector<uint8_t> params(rng() % 64);
  for (auto& b : params) b = biased_byte(rng);

  if (rng() % 2 == 0) {
    static const dxl::Instruction kInstructions[] = {
        dxl::Instruction::Ping, dxl::Instruction::Read,
        dxl::Instruction::Write, dxl::Instruction::SyncRead,
        dxl::Instruction::SyncWrite};
    dxl::InstructionPacket pkt;
    pkt.target_id = static_cast<uint8_t>(rng() % 253);
    pkt.instruction = kInstructions[rng() % 5];
    pkt.params = std::move(params);
    return pkt;
  }
  dxl::StatusPacket pkt;
  pkt.source_id = static_cast<uint8_t>(rng() % 253);
  pkt.error = static_cast<uint8_t>(rng() % 128);
  pkt.params = std::move(params);
  return pkt;
}

std::vector<uint8_t> encode_any(const dxl::AnyPacket& pkt) {
  if (const auto* ins = std::get_if<dxl::InstructionPacket>(&pkt)) {
    return dxl::encode_instruction(*ins);
  }
  return dxl::encode_status(std::get<dxl::StatusPacket>(pkt));
}

bool criterion_protocol_roundtrip() {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const dxl::AnyPacket pkt = random_packet(rng);
    const auto decoded = dxl::decode_frame(encode_any(pkt));
    if (!decoded || !(*decoded == pkt)) return false;
  }

  // Chunking invariance over a fixed 50-packet stream.
  std::vector<dxl::AnyPacket> sent;
  std::vector<uint8_t> stream;
  for (int i = 0; i < 50; ++i) {
    sent.push_back(random_packet(rng));
    const auto bytes = encode_any(sent.back());
    stream.insert(stream.end(), bytes.begin(), bytes.end());
  }

  auto collect = [](const std::vector<dxl::ParseEvent>& events,
                    std::vector<dxl::AnyPacket>& out) {
    for (const auto& e : events) {
      if (const auto* p = std::get_if<dxl::PacketEvent>(&e)) {
        out.push_back(p->packet);
      }
    }
  };

  std::vector<dxl::AnyPacket> baseline;
  {
    dxl::StreamParser parser;
    collect(parser.feed(stream), baseline);
  }
  if (baseline.size() != sent.size()) return false;
  for (size_t i = 0; i < sent.size(); ++i) {
    if (!(baseline[i] == sent[i])) return false;
  }

  for (int trial = 0; trial < 100; ++trial) {
    dxl::StreamParser parser;
    std::vector<dxl::AnyPacket> got;
    size_t pos = 0;
    while (pos < stream.size()) {
      const size_t n =
          std::min<size_t>(1 + rng() % 37, stream.size() - pos);
      collect(parser.feed(std::span<const uint8_t>(&stream[pos], n)), got);
      pos += n;
    }
    if (got.size() != baseline.size()) return false;
    for (size_t i = 0; i < got.size(); ++i) {
      if (!(got[i] == baseline[i])) return false;
    }
  }
  return true;
}

// Plain shift-register form, kept deliberately different from the library's
// table implementation.
uint16_t crc16_reference(std::span<const uint8_t> data) {
  uint16_t crc = 0;
  for (uint8_t byte : data) {
    crc ^= static_cast<uint16_t>(byte) << 8;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<uint16_t>((crc << 1) ^ 0x8005)
                           : static_cast<uint16_t>(crc << 1);
    }
  }
  return crc;
}

bool criterion_crc_oracle() {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10000; ++i) {
    std::vector<uint8_t> buf(rng() % 257);
    for (auto& b : buf) b = static_cast<uint8_t>(rng());
    if (dxl::crc16(buf) != crc16_reference(buf)) return false;
  }
  for (int v = 0; v < 256; ++v) {
    const uint8_t b = static_cast<uint8_t>(v);
    const std::span<const uint8_t> one(&b, 1);
    if (dxl::crc16(one) != crc16_reference(one)) return false;
  }
  const std::vector<uint8_t> ping_head{0xFF, 0xFF, 0xFD, 0x00,
                                       0x01, 0x03, 0x00, 0x01};
  return dxl::crc16(ping_head) == 0x4E19;
}

bool criterion_kinematics_identity() {
  const kin::WheelConfig cfg;
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> lin(-3.0, 3.0);
  std::uniform_real_distribution<double> ang(-10.0, 10.0);

  for (int i = 0; i < 1000; ++i) {
    const kin::BodyTwist t{lin(rng), lin(rng), ang(rng)};
    const auto result = kin::forward(kin::inverse(t, cfg), cfg);
    const double scale =
        std::max({1.0, std::abs(t.vx), std::abs(t.vy), std::abs(t.omega)});
    if (std::abs(result.twist.vx - t.vx) > 1e-9 * scale) return false;
    if (std::abs(result.twist.vy - t.vy) > 1e-9 * scale) return false;
    if (std::abs(result.twist.omega - t.omega) > 1e-9 * scale) return false;
  }

  kin::WheelConfig doubled = cfg;
  doubled.gear_ratio *= 2.0;
  for (int i = 0; i < 1000; ++i) {
    const kin::BodyTwist t{lin(rng), lin(rng), ang(rng)};
    const auto r1 = kin::inverse(t, cfg);
    const auto r2 = kin::inverse(t, doubled);
    for (int w = 0; w < 4; ++w) {
      const double scale = std::max(1.0, std::abs(r1.rates[w]));
      if (std::abs(2.0 * r2.rates[w] - r1.rates[w]) > 1e-12 * scale) {
        return false;
      }
    }
  }
  return true;
}

bool criterion_servo_tracking() {
  dxl::Servo servo(1);
  servo.set_reg_value(dxl::reg::kOperatingMode, dxl::kModeVelocity);
  servo.set_reg_value(dxl::reg::kTorqueEnable, 1);
  servo.set_reg_value(dxl::reg::kGoalVelocity, 200);

  const double dt = 0.001;
  for (int i = 0; i < 150; ++i) {
    servo.step_dynamics(dt);
  }
  const int32_t present = servo.reg_value(dxl::reg::kPresentVelocity);
  return present >= 199 && present <= 201;
}

bool criterion_kicker_closed_form() {
  const kicker::KickerParams params;
  kicker::KickerState charged;
  charged.v_cap = params.v_max;
  const auto kick = kicker::trigger(charged, params, 0.0);

  const double expected =
      std::sqrt(2.0 * params.efficiency * 0.5 * params.capacitance *
                params.v_max * params.v_max / params.ball_mass);
  if (std::abs(kick.ball_speed - expected) > 1e-12 * expected) return false;

  kicker::KickerState state;
  state.charging = true;
  const double dt = 0.001;
  double t = 0.0;
  int steps = 0;
  while (state.v_cap < params.v_max && steps < 2000) {
    state = kicker::charge_step(state, params, t, dt);
    t += dt;
    ++steps;
  }
  const double analytic =
      params.capacitance * params.v_max / params.charge_current;
  return std::abs(t - analytic) <= dt + 1e-12;
}

bool criterion_goal_scenario() {
  tac::RunConfig cfg = tac::default_run_config();
  cfg.scenario = "one_v_zero_goal";
  cfg.seed = 7;

  const auto a = tac::run_scenario(cfg);
  const auto b = tac::run_scenario(cfg);
  const auto c = tac::run_scenario(cfg);
  if (a.failed || a.elapsed >= 15.0) return false;
  return a.trace_hash == b.trace_hash && b.trace_hash == c.trace_hash;
}

bool criterion_sprint_metric() {
  tac::RunConfig cfg = tac::default_run_config();
  cfg.scenario = "sprint";
  const auto report = tac::run_scenario(cfg);
  return !report.failed && report.sprint_time_4m >= 1.708 &&
         report.sprint_time_4m <= 2.05;
}

bool criterion_safety_properties() {
  const ctl::BridgeConfig cfg;
  std::mt19937_64 rng(44);

  for (int run = 0; run < 200; ++run) {
    ctl::BridgeState state;
    double now = 0.0;
    for (int i = 0; i < 100; ++i) {
      net::RobotCommand cmd;
      cmd.robot_id = 1;
      cmd.vx_mm_s = static_cast<int16_t>(rng());
      cmd.vy_mm_s = static_cast<int16_t>(rng());
      cmd.omega_mrad_s = static_cast<int16_t>(rng());
      cmd.kick_mm_s = static_cast<uint16_t>(rng());
      cmd.flags = static_cast<uint8_t>(rng());
      now += (rng() % 40) * 0.001;
      ctl::watchdog_check(state, cfg, now);
      ctl::filter_command(cmd, state, cfg, now);
      if (std::hypot(state.last_twist.vx, state.last_twist.vy) >
          cfg.v_max + 1e-9) {
        return false;
      }
      if (std::abs(state.last_twist.omega) > cfg.omega_max + 1e-9) {
        return false;
      }
    }
    ctl::watchdog_check(state, cfg, now + cfg.staleness_timeout + 1e-6);
    if (state.last_twist.vx != 0.0 || state.last_twist.vy != 0.0 ||
        state.last_twist.omega != 0.0 || state.charger_enabled) {
      return false;
    }
  }

  // Delivered kick speed stays under the cap for any charge and request.
  const sim::FieldParams field;
  const kicker::KickerParams kparams;
  std::uniform_real_distribution<double> charge(0.0, kparams.v_max);
  std::uniform_real_distribution<double> request(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    sim::WorldState world;
    world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
    world.robots[0].kick.v_cap = charge(rng);
    world.ball.pos = {0.115, 0.0};
    const double capped = std::min(request(rng), cfg.kick_cap);
    sim::attempt_kick(world, field, kparams, 1, capped);
    const double speed = std::hypot(world.ball.vel.x, world.ball.vel.y);
    if (speed > cfg.kick_cap + 1e-12) return false;
  }
  return true;
}

bool criterion_wire_robustness() {
  net::RobotCommand cmd;
  cmd.robot_id = 2;
  cmd.vx_mm_s = 1500;
  cmd.vy_mm_s = -900;
  cmd.omega_mrad_s = 314;
  cmd.kick_mm_s = 4000;
  cmd.flags = net::kFlagCharger;
  const auto cmd_bytes = net::encode_command(cmd);

  net::VisionFrame frame;
  frame.frame_no = 99;
  frame.t_us = 424242;
  frame.ball_x_mm = 777;
  frame.ball_y_mm = -777;
  frame.robots.push_back({1, 100, 200, 300});
  frame.robots.push_back({2, -100, -200, -300});
  const auto vis_bytes = net::encode_vision(frame);

  for (size_t pos = 0; pos < cmd_bytes.size(); ++pos) {
    for (int delta = 1; delta < 256; ++delta) {
      auto bad = cmd_bytes;
      bad[pos] = static_cast<uint8_t>(bad[pos] + delta);
      if (!std::holds_alternative<net::DecodeError>(
              net::decode_command(bad))) {
        return false;
      }
    }
  }
  for (size_t pos = 0; pos < vis_bytes.size(); ++pos) {
    for (int delta = 1; delta < 256; ++delta) {
      auto bad = vis_bytes;
      bad[pos] = static_cast<uint8_t>(bad[pos] + delta);
      if (!std::holds_alternative<net::DecodeError>(
              net::decode_vision(bad))) {
        return false;
      }
    }
  }

  std::mt19937_64 rng(55);
  for (int i = 0; i < 10000; ++i) {
    std::vector<uint8_t> buf;
    switch (rng() % 3) {
      case 0:
        buf.assign(cmd_bytes.begin(), cmd_bytes.begin() + rng() % 17);
        break;
      case 1:
        buf.assign(vis_bytes.begin(),
                   vis_bytes.begin() + rng() % vis_bytes.size());
        break;
      default:
        buf.resize(rng() % 80);
        for (auto& b : buf) b = static_cast<uint8_t>(rng());
        break;
    }
    const bool cmd_err =
        std::holds_alternative<net::DecodeError>(net::decode_command(buf));
    const bool vis_err =
        std::holds_alternative<net::DecodeError>(net::decode_vision(buf));
    if (!cmd_err || !vis_err) return false;
  }
  return true;
}

}  // namespace

int main() {
  report(1, "protocol roundtrip and chunking invariance",
         criterion_protocol_roundtrip());
  report(2, "crc oracle equivalence", criterion_crc_oracle());
  report(3, "kinematics identity and gear scaling",
         criterion_kinematics_identity());
  report(4, "servo velocity tracking under slew",
         criterion_servo_tracking());
  report(5, "kicker closed form and charge time",
         criterion_kicker_closed_form());
  report(6, "one_v_zero_goal scores deterministically",
         criterion_goal_scenario());
  report(7, "sprint metric inside the analytic window",
         criterion_sprint_metric());
  report(8, "command safety envelope", criterion_safety_properties());
  report(9, "wire corruption and truncation robustness",
         criterion_wire_robustness());

  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failing\n", g_failures);
  return 1;
}
