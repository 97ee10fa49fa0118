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
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace dynapitch::dxl {

// Servo bus wire format
//
//   FF FF FD 00 | id | len_lo len_hi | instruction | payload... | crc_lo crc_hi
//
// The length field counts instruction + stuffed payload + 2 CRC bytes.
// The CRC covers everything from the first FF through the last payload byte.
// Status packets carry 0x55 in the instruction slot, followed by an error
// byte and then their parameters. All multi-byte integers are little-endian.

inline constexpr uint8_t kBroadcastId = 254;
inline constexpr size_t kHeaderSize = 4;      // FF FF FD 00
inline constexpr size_t kPreambleSize = 7;    // header + id + length field
inline constexpr size_t kMaxFrameSize = 4096; // larger length fields are desync

enum class Instruction : uint8_t {
  Ping = 0x01,
  Read = 0x02,
  Write = 0x03,
  SyncRead = 0x82,
  SyncWrite = 0x83,
};

inline constexpr uint8_t kStatusInstruction = 0x55;

// Status error byte layout. Bit 7 is unused.
enum StatusError : uint8_t {
  kErrResultFail = 1u << 0,
  kErrInstruction = 1u << 1,
  kErrCrc = 1u << 2,
  kErrDataRange = 1u << 3,
  kErrDataLength = 1u << 4,
  kErrDataLimit = 1u << 5,
  kErrAccess = 1u << 6,
};

struct InstructionPacket {
  uint8_t target_id = 0;  // 0..252, or 254 broadcast; 253/255 are reserved
  Instruction instruction = Instruction::Ping;
  std::vector<uint8_t> params;

  bool operator==(const InstructionPacket&) const = default;
};

struct StatusPacket {
  uint8_t source_id = 0;
  uint8_t error = 0;  // 0 = ok
  std::vector<uint8_t> params;

  bool operator==(const StatusPacket&) const = default;
};

using AnyPacket = std::variant<InstructionPacket, StatusPacket>;

bool valid_unicast_id(uint8_t id);  // 0..252
bool valid_target_id(uint8_t id);   // unicast or broadcast
bool valid_instruction_byte(uint8_t b);

// Inserts an extra FD after every FF FF FD in the payload region so the
// pattern never reads as a frame header.
std::vector<uint8_t> stuff(std::span<const uint8_t> payload);

// Inverse of stuff(). Returns nullopt when an FF FF FD run is not followed
// by the FD escape byte.
std::optional<std::vector<uint8_t>> unstuff(std::span<const uint8_t> wire);

// Encoders validate ids (and, for sizes, that the stuffed payload still fits
// the 16-bit length field) and throw std::invalid_argument on violations.
std::vector<uint8_t> encode_instruction(const InstructionPacket& pkt);
std::vector<uint8_t> encode_status(const StatusPacket& pkt);
std::vector<uint8_t> encode(const AnyPacket& pkt);

// Decodes bytes that hold exactly one complete frame (header through CRC).
// Returns nullopt on any malformation: bad header, bad CRC, bad stuffing,
// reserved id, unknown instruction, or trailing bytes.
std::optional<AnyPacket> decode_frame(std::span<const uint8_t> frame);

const char* instruction_name(Instruction in);

}  // namespace dynapitch::dxl
