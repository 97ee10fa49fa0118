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
#include <vector>

#include "dynapitch/packet.hpp"
#include "dynapitch/servo.hpp"

namespace dynapitch::dxl {

// Half-duplex bus holding a bank of servos. One transaction = one encoded
// instruction frame in, zero or more encoded status frames out:
//
//   PING  unicast    -> one status (model number u16 LE + firmware u8)
//   PING  broadcast  -> one status per servo, ascending id
//   READ  unicast    -> one status (register bytes, or an error bit)
//   WRITE unicast    -> one status; broadcast WRITE applies everywhere
//                       but stays silent
//   SYNC_WRITE       -> params = addr u16 + len u16 + k * (id + data);
//                       applied atomically, never answered
//   SYNC_READ        -> params = addr u16 + len u16 + k * id; statuses in
//                       request order, unknown ids skipped
//
// A unicast to an absent id models a wire timeout: no reply at all. A frame
// that does not decode (or decodes to something other than an instruction)
// yields no reply and latches the diagnostic fault flag.
class VirtualBus {
 public:
  // Throws std::invalid_argument on a duplicate or reserved id.
  Servo& add_servo(uint8_t id);

  Servo* find(uint8_t id);
  const Servo* find(uint8_t id) const;
  std::vector<Servo>& servos() { return servos_; }
  const std::vector<Servo>& servos() const { return servos_; }

  std::vector<std::vector<uint8_t>> transact(std::span<const uint8_t> frame);

  void step_all(double dt);

  bool fault() const { return fault_count_ > 0; }
  uint64_t fault_count() const { return fault_count_; }
  void clear_faults() { fault_count_ = 0; }

 private:
  std::vector<std::vector<uint8_t>> dispatch(const InstructionPacket& pkt);
  std::vector<uint8_t> ping_reply(const Servo& servo) const;

  std::vector<Servo> servos_;
  uint64_t fault_count_ = 0;
};

}  // namespace dynapitch::dxl
