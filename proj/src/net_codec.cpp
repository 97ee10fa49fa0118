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

#include "dynapitch/net_codec.hpp"

#include <stdexcept>

#include "dynapitch/crc16.hpp"

namespace dynapitch::net {

namespace {

class Writer {
 public:
  void u8(uint8_t v) { bytes_.push_back(v); }
  void u16(uint16_t v) {
    bytes_.push_back(static_cast<uint8_t>(v));
    bytes_.push_back(static_cast<uint8_t>(v >> 8));
  }
  void u32(uint32_t v) {
    u16(static_cast<uint16_t>(v));
    u16(static_cast<uint16_t>(v >> 16));
  }
  void u64(uint64_t v) {
    u32(static_cast<uint32_t>(v));
    u32(static_cast<uint32_t>(v >> 32));
  }
  void i16(int16_t v) { u16(static_cast<uint16_t>(v)); }
  void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }

  void seal_with_crc() {
    const uint16_t crc = dxl::crc16(bytes_);
    u16(crc);
  }

  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return bytes_[at_++]; }
  uint16_t u16() {
    const uint16_t v =
        static_cast<uint16_t>(bytes_[at_] | (bytes_[at_ + 1] << 8));
    at_ += 2;
    return v;
  }
  uint32_t u32() {
    const uint32_t lo = u16();
    const uint32_t hi = u16();
    return lo | (hi << 16);
  }
  uint64_t u64() {
    const uint64_t lo = u32();
    const uint64_t hi = u32();
    return lo | (hi << 32);
  }
  int16_t i16() { return static_cast<int16_t>(u16()); }
  int32_t i32() { return static_cast<int32_t>(u32()); }

 private:
  std::span<const uint8_t> bytes_;
  size_t at_ = 0;
};

bool trailer_crc_ok(std::span<const uint8_t> frame) {
  const size_t body = frame.size() - 2;
  const uint16_t expect = dxl::crc16(frame.subspan(0, body));
  const uint16_t found =
      static_cast<uint16_t>(frame[body] | (frame[body + 1] << 8));
  return expect == found;
}

}  // namespace

const char* decode_error_name(DecodeError err) {
  switch (err) {
    case DecodeError::kLength: return "length";
    case DecodeError::kMagic: return "magic";
    case DecodeError::kVersion: return "version";
    case DecodeError::kCrc: return "crc";
    case DecodeError::kCount: return "count";
  }
  return "unknown";
}

std::vector<uint8_t> encode_command(const RobotCommand& cmd) {
  Writer w;
  w.u32(kCommandMagic);
  w.u8(kWireVersion);
  w.u8(cmd.robot_id);
  w.i16(cmd.vx_mm_s);
  w.i16(cmd.vy_mm_s);
  w.i16(cmd.omega_mrad_s);
  w.u16(cmd.kick_mm_s);
  w.u8(cmd.flags);
  w.seal_with_crc();
  return w.take();
}

Decoded<RobotCommand> decode_command(std::span<const uint8_t> frame) {
  if (frame.size() != kCommandSize) return DecodeError::kLength;
  Reader r(frame);
  if (r.u32() != kCommandMagic) return DecodeError::kMagic;
  if (r.u8() != kWireVersion) return DecodeError::kVersion;
  if (!trailer_crc_ok(frame)) return DecodeError::kCrc;
  RobotCommand cmd;
  cmd.robot_id = r.u8();
  cmd.vx_mm_s = r.i16();
  cmd.vy_mm_s = r.i16();
  cmd.omega_mrad_s = r.i16();
  cmd.kick_mm_s = r.u16();
  cmd.flags = r.u8();
  return cmd;
}

std::vector<uint8_t> encode_vision(const VisionFrame& frame) {
  if (frame.robots.size() > kMaxVisionRobots) {
    throw std::invalid_argument("too many robots for one vision frame");
  }
  Writer w;
  w.u32(kVisionMagic);
  w.u8(kWireVersion);
  w.u32(frame.frame_no);
  w.u64(frame.t_us);
  w.i32(frame.ball_x_mm);
  w.i32(frame.ball_y_mm);
  w.u8(static_cast<uint8_t>(frame.robots.size()));
  for (const auto& robot : frame.robots) {
    w.u8(robot.id);
    w.i32(robot.x_mm);
    w.i32(robot.y_mm);
    w.i16(robot.theta_mrad);
  }
  w.seal_with_crc();
  return w.take();
}

Decoded<VisionFrame> decode_vision(std::span<const uint8_t> frame) {
  if (frame.size() < kVisionHeaderSize + 2) return DecodeError::kLength;
  Reader r(frame);
  if (r.u32() != kVisionMagic) return DecodeError::kMagic;
  if (r.u8() != kWireVersion) return DecodeError::kVersion;

  VisionFrame out;
  out.frame_no = r.u32();
  out.t_us = r.u64();
  out.ball_x_mm = r.i32();
  out.ball_y_mm = r.i32();
  const uint8_t count = r.u8();
  if (count > kMaxVisionRobots) return DecodeError::kCount;
  if (frame.size() != kVisionHeaderSize + count * kVisionRobotSize + 2) {
    return DecodeError::kLength;
  }
  if (!trailer_crc_ok(frame)) return DecodeError::kCrc;
  for (uint8_t i = 0; i < count; ++i) {
    VisionRobot robot;
    robot.id = r.u8();
    robot.x_mm = r.i32();
    robot.y_mm = r.i32();
    robot.theta_mrad = r.i16();
    out.robots.push_back(robot);
  }
  return out;
}

}  // namespace dynapitch::net
