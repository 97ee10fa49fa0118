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

#include "dynapitch/packet.hpp"

#include <stdexcept>

#include "dynapitch/crc16.hpp"

namespace dynapitch::dxl {

bool valid_unicast_id(uint8_t id) { return id <= 252; }

bool valid_target_id(uint8_t id) {
  return valid_unicast_id(id) || id == kBroadcastId;
}

bool valid_instruction_byte(uint8_t b) {
  switch (b) {
    case 0x01:
    case 0x02:
    case 0x03:
    case 0x82:
    case 0x83:
      return true;
    default:
      return false;
  }
}

const char* instruction_name(Instruction in) {
  switch (in) {
    case Instruction::Ping:
      return "ping";
    case Instruction::Read:
      return "read";
    case Instruction::Write:
      return "write";
    case Instruction::SyncRead:
      return "sync_read";
    case Instruction::SyncWrite:
      return "sync_write";
  }
  return "unknown";
}

std::vector<uint8_t> stuff(std::span<const uint8_t> payload) {
  std::vector<uint8_t> out;
  out.reserve(payload.size() + payload.size() / 16);
  int ff_run = 0;
  for (uint8_t b : payload) {
    out.push_back(b);
    if (b == 0xFF) {
      ++ff_run;
    } else if (b == 0xFD && ff_run >= 2) {
      out.push_back(0xFD);  // escape
      ff_run = 0;
    } else {
      ff_run = 0;
    }
  }
  return out;
}

std::optional<std::vector<uint8_t>> unstuff(std::span<const uint8_t> wire) {
  std::vector<uint8_t> out;
  out.reserve(wire.size());
  int ff_run = 0;
  size_t i = 0;
  while (i < wire.size()) {
    const uint8_t b = wire[i];
    if (b == 0xFD && ff_run >= 2) {
      if (i + 1 >= wire.size() || wire[i + 1] != 0xFD) {
        return std::nullopt;  // missing escape byte
      }
      out.push_back(0xFD);
      i += 2;
      ff_run = 0;
      continue;
    }
    out.push_back(b);
    ff_run = (b == 0xFF) ? ff_run + 1 : 0;
    ++i;
  }
  return out;
}

namespace {

std::vector<uint8_t> assemble(uint8_t id, std::span<const uint8_t> body) {
  // body = instruction byte (+ error byte for statuses) + raw params
  std::vector<uint8_t> stuffed = stuff(body);
  const size_t length = stuffed.size() + 2;  // + CRC
  if (length > 0xFFFF) {
    throw std::invalid_argument("packet payload too large for length field");
  }
  std::vector<uint8_t> frame;
  frame.reserve(kPreambleSize + length);
  frame.insert(frame.end(), {0xFF, 0xFF, 0xFD, 0x00});
  frame.push_back(id);
  frame.push_back(static_cast<uint8_t>(length & 0xFF));
  frame.push_back(static_cast<uint8_t>(length >> 8));
  frame.insert(frame.end(), stuffed.begin(), stuffed.end());
  const uint16_t crc = crc16(frame);
  frame.push_back(static_cast<uint8_t>(crc & 0xFF));
  frame.push_back(static_cast<uint8_t>(crc >> 8));
  return frame;
}

}  // namespace

std::vector<uint8_t> encode_instruction(const InstructionPacket& pkt) {
  if (!valid_target_id(pkt.target_id)) {
    throw std::invalid_argument("reserved or invalid target id");
  }
  std::vector<uint8_t> body;
  body.reserve(1 + pkt.params.size());
  body.push_back(static_cast<uint8_t>(pkt.instruction));
  body.insert(body.end(), pkt.params.begin(), pkt.params.end());
  return assemble(pkt.target_id, body);
}

std::vector<uint8_t> encode_status(const StatusPacket& pkt) {
  if (!valid_unicast_id(pkt.source_id)) {
    throw std::invalid_argument("invalid status source id");
  }
  std::vector<uint8_t> body;
  body.reserve(2 + pkt.params.size());
  body.push_back(kStatusInstruction);
  body.push_back(pkt.error);
  body.insert(body.end(), pkt.params.begin(), pkt.params.end());
  return assemble(pkt.source_id, body);
}

std::vector<uint8_t> encode(const AnyPacket& pkt) {
  if (const auto* ins = std::get_if<InstructionPacket>(&pkt)) {
    return encode_instruction(*ins);
  }
  return encode_status(std::get<StatusPacket>(pkt));
}

std::optional<AnyPacket> decode_frame(std::span<const uint8_t> frame) {
  if (frame.size() < kPreambleSize + 3) {  // smallest: ping, length 3
    return std::nullopt;
  }
  if (frame[0] != 0xFF || frame[1] != 0xFF || frame[2] != 0xFD ||
      frame[3] != 0x00) {
    return std::nullopt;
  }
  const uint8_t id = frame[4];
  const size_t length = static_cast<size_t>(frame[5]) |
                        (static_cast<size_t>(frame[6]) << 8);
  if (length < 3 || frame.size() != kPreambleSize + length) {
    return std::nullopt;
  }
  const size_t crc_at = frame.size() - 2;
  const uint16_t stored = static_cast<uint16_t>(frame[crc_at]) |
                          static_cast<uint16_t>(frame[crc_at + 1] << 8);
  if (crc16(frame.subspan(0, crc_at)) != stored) {
    return std::nullopt;
  }
  auto body = unstuff(frame.subspan(kPreambleSize, length - 2));
  if (!body || body->empty()) {
    return std::nullopt;
  }
  const uint8_t instr = (*body)[0];
  if (instr == kStatusInstruction) {
    if (!valid_unicast_id(id) || body->size() < 2) {
      return std::nullopt;
    }
    StatusPacket st;
    st.source_id = id;
    st.error = (*body)[1];
    st.params.assign(body->begin() + 2, body->end());
    return AnyPacket{std::move(st)};
  }
  if (!valid_instruction_byte(instr) || !valid_target_id(id)) {
    return std::nullopt;
  }
  InstructionPacket pkt;
  pkt.target_id = id;
  pkt.instruction = static_cast<Instruction>(instr);
  pkt.params.assign(body->begin() + 1, body->end());
  return AnyPacket{std::move(pkt)};
}

}  // namespace dynapitch::dxl
