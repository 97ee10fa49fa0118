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
#include <span>
#include <variant>
#include <vector>

namespace dynapitch::net {

// UDP wire formats, all little-endian, CRC-16 (same parameters as the servo
// bus) over every byte before the trailer.
//
// Command, fixed 17 bytes:
//   magic u32 = 0x53534C43 | version u8 = 1 | robot_id u8 | vx i16 | vy i16
//   | omega i16 | kick u16 | flags u8 | crc u16
//
// Vision, 28 bytes + 11 per robot:
//   magic u32 = 0x53534C56 | version u8 = 1 | frame_no u32 | t_us u64
//   | ball_x i32 | ball_y i32 | count u8 | count * robot | crc u16
//   robot: id u8 | x i32 | y i32 | theta i16
//
// Linear units are mm, angular mrad; kick speed mm/s.

inline constexpr uint32_t kCommandMagic = 0x53534C43;
inline constexpr uint32_t kVisionMagic = 0x53534C56;
inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kCommandSize = 17;
inline constexpr size_t kVisionHeaderSize = 26;  // through count byte
inline constexpr size_t kVisionRobotSize = 11;
inline constexpr size_t kMaxVisionRobots = 16;

inline constexpr uint8_t kFlagDribble = 1u << 0;
inline constexpr uint8_t kFlagCharger = 1u << 1;

struct RobotCommand {
  uint8_t robot_id = 0;
  int16_t vx_mm_s = 0;
  int16_t vy_mm_s = 0;
  int16_t omega_mrad_s = 0;
  uint16_t kick_mm_s = 0;  // 0 = no kick
  uint8_t flags = 0;

  bool operator==(const RobotCommand&) const = default;
};

struct VisionRobot {
  uint8_t id = 0;
  int32_t x_mm = 0;
  int32_t y_mm = 0;
  int16_t theta_mrad = 0;

  bool operator==(const VisionRobot&) const = default;
};

struct VisionFrame {
  uint32_t frame_no = 0;
  uint64_t t_us = 0;
  int32_t ball_x_mm = 0;
  int32_t ball_y_mm = 0;
  std::vector<VisionRobot> robots;

  bool operator==(const VisionFrame&) const = default;
};

enum class DecodeError {
  kLength,
  kMagic,
  kVersion,
  kCrc,
  kCount,
};

const char* decode_error_name(DecodeError err);

template <typename T>
using Decoded = std::variant<T, DecodeError>;

std::vector<uint8_t> encode_command(const RobotCommand& cmd);
Decoded<RobotCommand> decode_command(std::span<const uint8_t> frame);

// Throws std::invalid_argument above kMaxVisionRobots.
std::vector<uint8_t> encode_vision(const VisionFrame& frame);
Decoded<VisionFrame> decode_vision(std::span<const uint8_t> frame);

}  // namespace dynapitch::net
