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

#include "dynapitch/servo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynapitch::dxl {

namespace {

constexpr RegisterSpec kLayout[] = {
    {reg::kId, 1, Access::Eeprom, false, 0, 252, 0, "id"},
    {reg::kOperatingMode, 1, Access::Eeprom, false, 0, 16, kModePosition,
     "operating_mode"},
    {reg::kTorqueEnable, 1, Access::ReadWrite, false, 0, 1, 0,
     "torque_enable"},
    {reg::kGoalPwm, 2, Access::ReadWrite, true, -885, 885, 0, "goal_pwm"},
    {reg::kGoalVelocity, 4, Access::ReadWrite, true, -265, 265, 0,
     "goal_velocity"},
    {reg::kGoalPosition, 4, Access::ReadWrite, true, 0, 4095, 0,
     "goal_position"},
    {reg::kPresentVelocity, 4, Access::ReadOnly, true, INT32_MIN, INT32_MAX,
     0, "present_velocity"},
    {reg::kPresentPosition, 4, Access::ReadOnly, true, INT32_MIN, INT32_MAX,
     0, "present_position"},
};

constexpr int kRegCount = static_cast<int>(std::size(kLayout));

int32_t clamp_to(const RegisterSpec& spec, int64_t value) {
  return static_cast<int32_t>(
      std::clamp<int64_t>(value, spec.min, spec.max));
}

int64_t decode_le(std::span<const uint8_t> data, bool is_signed) {
  uint64_t raw = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    raw |= static_cast<uint64_t>(data[i]) << (8 * i);
  }
  if (is_signed && !data.empty()) {
    const uint64_t sign_bit = 1ull << (8 * data.size() - 1);
    if (raw & sign_bit) {
      raw |= ~((sign_bit << 1) - 1);
    }
  }
  return static_cast<int64_t>(raw);
}

double wrap_ticks(double pos) {
  pos = std::fmod(pos, kTicksPerRev);
  if (pos < 0.0) pos += kTicksPerRev;
  return pos;
}

}  // namespace

std::span<const RegisterSpec> control_table_layout() { return kLayout; }

Servo::Servo(uint8_t id) {
  if (!valid_unicast_id(id)) {
    throw std::invalid_argument("servo id out of unicast range");
  }
  for (int i = 0; i < kRegCount; ++i) {
    values_[i] = kLayout[i].initial;
  }
  values_[0] = id;
  sync_present_registers();
}

uint8_t Servo::id() const { return static_cast<uint8_t>(values_[0]); }

int Servo::lookup(uint16_t addr, uint16_t len) const {
  for (int i = 0; i < kRegCount; ++i) {
    if (kLayout[i].addr == addr && kLayout[i].size == len) return i;
  }
  return -1;
}

Servo::ReadResult Servo::table_read(uint16_t addr, uint16_t len) const {
  const int idx = lookup(addr, len);
  if (idx < 0) return {StatusError::kErrDataLength, {}};
  const uint32_t raw = static_cast<uint32_t>(values_[idx]);
  std::vector<uint8_t> out(kLayout[idx].size);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(raw >> (8 * i));
  }
  return {0, std::move(out)};
}

uint8_t Servo::table_write(uint16_t addr, std::span<const uint8_t> data) {
  const int idx = lookup(addr, static_cast<uint16_t>(data.size()));
  if (idx < 0) return StatusError::kErrDataLength;
  const RegisterSpec& spec = kLayout[idx];
  if (spec.access == Access::ReadOnly) return StatusError::kErrAccess;
  if (spec.access == Access::Eeprom && torque_on()) {
    return StatusError::kErrAccess;
  }
  values_[idx] = clamp_to(spec, decode_le(data, spec.is_signed));
  return 0;
}

int32_t Servo::reg_value(uint16_t addr) const {
  for (int i = 0; i < kRegCount; ++i) {
    if (kLayout[i].addr == addr) return values_[i];
  }
  throw std::invalid_argument("unknown register address");
}

void Servo::set_reg_value(uint16_t addr, int32_t value) {
  for (int i = 0; i < kRegCount; ++i) {
    if (kLayout[i].addr == addr) {
      values_[i] = clamp_to(kLayout[i], value);
      return;
    }
  }
  throw std::invalid_argument("unknown register address");
}

bool Servo::torque_on() const { return reg_value(reg::kTorqueEnable) != 0; }

int Servo::operating_mode() const { return reg_value(reg::kOperatingMode); }

void Servo::sync_present_registers() {
  set_reg_value(reg::kPresentVelocity, static_cast<int32_t>(velocity_));
  set_reg_value(reg::kPresentPosition, static_cast<int32_t>(position_));
}

void Servo::step_dynamics(double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const double dv_max = kAccelLimitUnitsPerSec * dt;
  const int mode = operating_mode();
  const bool driven = torque_on() &&
                      (mode == kModeVelocity || mode == kModePosition);

  double target = 0.0;
  if (driven && mode == kModeVelocity) {
    target = static_cast<double>(reg_value(reg::kGoalVelocity));
  } else if (driven && mode == kModePosition) {
    const double goal = static_cast<double>(reg_value(reg::kGoalPosition));
    const double goal_vel =
        std::abs(static_cast<double>(reg_value(reg::kGoalVelocity)));
    const double vmax =
        goal_vel > 0.0 ? std::min(goal_vel, kVelocityLimitUnits)
                       : kVelocityLimitUnits;
    const double d = goal - position_;
    if (std::abs(d) <= 1.0 && std::abs(velocity_) <= dv_max) {
      position_ = goal;
      velocity_ = 0.0;
      sync_present_registers();
      return;
    }
    // Deceleration curve at half the slew limit so tracking never lags
    // into overshoot; the 0.5-tick slack parks the profile just short of
    // the goal where the snap above finishes the move.
    const double brake = std::max(0.0, std::abs(d) - 0.5);
    const double v_curve = std::sqrt(kAccelLimitUnitsPerSec * brake /
                                     kTicksPerSecPerUnit);
    target = std::copysign(std::min(vmax, v_curve), d);
  }

  const double dv =
      std::clamp(target - velocity_, -dv_max, dv_max);
  velocity_ =
      std::clamp(velocity_ + dv, -kVelocityLimitUnits, kVelocityLimitUnits);
  position_ += velocity_ * kTicksPerSecPerUnit * dt;

  if (mode == kModePosition) {
    position_ = std::clamp(position_, 0.0, 4095.0);
  } else {
    position_ = wrap_ticks(position_);
  }
  sync_present_registers();
}

}  // namespace dynapitch::dxl
