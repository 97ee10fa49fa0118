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

#include "dynapitch/bus.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynapitch::dxl {

namespace {

uint16_t read_u16(std::span<const uint8_t> p, size_t at) {
  return static_cast<uint16_t>(p[at] | (p[at + 1] << 8));
}

}  // namespace

Servo& VirtualBus::add_servo(uint8_t id) {
  if (!valid_unicast_id(id)) {
    throw std::invalid_argument("reserved servo id");
  }
  if (find(id) != nullptr) {
    throw std::invalid_argument("duplicate servo id");
  }
  servos_.emplace_back(id);
  return servos_.back();
}

Servo* VirtualBus::find(uint8_t id) {
  for (auto& servo : servos_) {
    if (servo.id() == id) return &servo;
  }
  return nullptr;
}

const Servo* VirtualBus::find(uint8_t id) const {
  return const_cast<VirtualBus*>(this)->find(id);
}

void VirtualBus::step_all(double dt) {
  for (auto& servo : servos_) servo.step_dynamics(dt);
}

std::vector<uint8_t> VirtualBus::ping_reply(const Servo& servo) const {
  std::vector<uint8_t> params = {
      static_cast<uint8_t>(kModelNumber & 0xFF),
      static_cast<uint8_t>(kModelNumber >> 8),
      kFirmwareVersion,
  };
  return encode_status({servo.id(), 0, std::move(params)});
}

std::vector<std::vector<uint8_t>> VirtualBus::transact(
    std::span<const uint8_t> frame) {
  auto decoded = decode_frame(frame);
  if (!decoded.has_value() ||
      !std::holds_alternative<InstructionPacket>(*decoded)) {
    ++fault_count_;
    return {};
  }
  return dispatch(std::get<InstructionPacket>(*decoded));
}

std::vector<std::vector<uint8_t>> VirtualBus::dispatch(
    const InstructionPacket& pkt) {
  std::vector<std::vector<uint8_t>> replies;
  const bool broadcast = pkt.target_id == kBroadcastId;
  const std::span<const uint8_t> params(pkt.params);

  switch (pkt.instruction) {
    case Instruction::Ping: {
      if (broadcast) {
        std::vector<uint8_t> ids;
        for (const auto& servo : servos_) ids.push_back(servo.id());
        std::sort(ids.begin(), ids.end());
        for (uint8_t id : ids) replies.push_back(ping_reply(*find(id)));
      } else if (const Servo* servo = find(pkt.target_id)) {
        replies.push_back(ping_reply(*servo));
      }
      break;
    }

    case Instruction::Read: {
      if (broadcast) break;
      Servo* servo = find(pkt.target_id);
      if (servo == nullptr) break;
      if (params.size() != 4) {
        replies.push_back(
            encode_status({servo->id(), StatusError::kErrDataLength, {}}));
        break;
      }
      auto result =
          servo->table_read(read_u16(params, 0), read_u16(params, 2));
      replies.push_back(
          encode_status({servo->id(), result.error, std::move(result.data)}));
      break;
    }

    case Instruction::Write: {
      if (params.size() < 2) {
        if (!broadcast) {
          if (Servo* servo = find(pkt.target_id)) {
            replies.push_back(
                encode_status({servo->id(), StatusError::kErrDataLength, {}}));
          }
        }
        break;
      }
      const uint16_t addr = read_u16(params, 0);
      const auto data = params.subspan(2);
      if (broadcast) {
        for (auto& servo : servos_) servo.table_write(addr, data);
      } else if (Servo* servo = find(pkt.target_id)) {
        const uint8_t error = servo->table_write(addr, data);
        replies.push_back(encode_status({servo->id(), error, {}}));
      }
      break;
    }

    case Instruction::SyncWrite: {
      if (params.size() < 4) {
        ++fault_count_;
        break;
      }
      const uint16_t addr = read_u16(params, 0);
      const uint16_t len = read_u16(params, 2);
      const size_t stride = 1 + static_cast<size_t>(len);
      const size_t body = params.size() - 4;
      if (len == 0 || body % stride != 0) {
        ++fault_count_;
        break;
      }
      struct Slice {
        Servo* servo;
        std::span<const uint8_t> data;
      };
      std::vector<Slice> slices;
      for (size_t at = 4; at < params.size(); at += stride) {
        if (Servo* servo = find(params[at])) {
          slices.push_back({servo, params.subspan(at + 1, len)});
        }
      }
      for (const auto& slice : slices) {
        slice.servo->table_write(addr, slice.data);
      }
      break;
    }

    case Instruction::SyncRead: {
      if (params.size() < 4) {
        ++fault_count_;
        break;
      }
      const uint16_t addr = read_u16(params, 0);
      const uint16_t len = read_u16(params, 2);
      for (size_t at = 4; at < params.size(); ++at) {
        const Servo* servo = find(params[at]);
        if (servo == nullptr) continue;
        auto result = servo->table_read(addr, len);
        replies.push_back(encode_status(
            {servo->id(), result.error, std::move(result.data)}));
      }
      break;
    }
  }
  return replies;
}

}  // namespace dynapitch::dxl
