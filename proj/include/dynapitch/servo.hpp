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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dynapitch/packet.hpp"

namespace dynapitch::dxl {

// XL430-class register map. Reads and writes must cover one register
// exactly; partial or spanning accesses are rejected with a data-length
// error. EEPROM-class registers are locked while torque is enabled.

namespace reg {
inline constexpr uint16_t kId = 7;
inline constexpr uint16_t kOperatingMode = 11;
inline constexpr uint16_t kTorqueEnable = 64;
inline constexpr uint16_t kGoalPwm = 100;
inline constexpr uint16_t kGoalVelocity = 104;
inline constexpr uint16_t kGoalPosition = 116;
inline constexpr uint16_t kPresentVelocity = 128;
inline constexpr uint16_t kPresentPosition = 132;
}  // namespace reg

inline constexpr int kModeVelocity = 1;
inline constexpr int kModePosition = 3;

inline constexpr uint16_t kModelNumber = 1060;  // XL430-W250 style
inline constexpr uint8_t kFirmwareVersion = 44;

// Motor model constants. One velocity unit is 0.229 rpm; one revolution is
// 4096 position ticks.
inline constexpr double kVelocityUnitRpm = 0.229;
inline constexpr double kTicksPerRev = 4096.0;
inline constexpr double kTicksPerSecPerUnit =
    kVelocityUnitRpm * kTicksPerRev / 60.0;  // 15.6330666...
inline constexpr double kVelocityLimitUnits = 265.0;
inline constexpr double kAccelLimitUnitsPerSec = 2000.0;

enum class Access : uint8_t { ReadOnly, ReadWrite, Eeprom };

struct RegisterSpec {
  uint16_t addr;
  uint8_t size;
  Access access;
  bool is_signed;
  int32_t min;
  int32_t max;
  int32_t initial;
  const char* name;
};

std::span<const RegisterSpec> control_table_layout();

class Servo {
 public:
  explicit Servo(uint8_t id);

  uint8_t id() const;

  struct ReadResult {
    uint8_t error = 0;  // StatusError bits; 0 = ok
    std::vector<uint8_t> data;
  };

  // Little-endian register bytes; the span must match one register exactly.
  ReadResult table_read(uint16_t addr, uint16_t len) const;

  // Returns a StatusError byte; values are clamped to the register limits.
  uint8_t table_write(uint16_t addr, std::span<const uint8_t> data);

  // Unchecked register access for tooling and tests (still clamps).
  int32_t reg_value(uint16_t addr) const;
  void set_reg_value(uint16_t addr, int32_t value);

  bool torque_on() const;
  int operating_mode() const;

  // Continuous state behind the Present* registers.
  double position_ticks() const { return position_; }
  double velocity_units() const { return velocity_; }

  // Advances the motor model: velocity slews toward its target at the
  // acceleration limit, position integrates from velocity. In position mode
  // the target follows a trapezoidal profile capped at |GoalVelocity| (or
  // the velocity limit when zero); with torque off the velocity decays to
  // rest and goals are ignored.
  void step_dynamics(double dt);

 private:
  int lookup(uint16_t addr, uint16_t len) const;  // exact-span index or -1
  void sync_present_registers();

  std::array<int32_t, 8> values_{};
  double position_ = 0.0;  // ticks
  double velocity_ = 0.0;  // dxl velocity units
};

}  // namespace dynapitch::dxl
