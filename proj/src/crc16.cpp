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

#include "dynapitch/crc16.hpp"

#include <array>

namespace dynapitch::dxl {

namespace {

constexpr uint16_t kPoly = 0x8005;

constexpr std::array<uint16_t, 256> make_table() {
  std::array<uint16_t, 256> table{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint16_t crc = static_cast<uint16_t>(i << 8);
    for (int bit = 0; bit < 8; ++bit) {
      if (crc & 0x8000) {
        crc = static_cast<uint16_t>((crc << 1) ^ kPoly);
      } else {
        crc = static_cast<uint16_t>(crc << 1);
      }
    }
    table[i] = crc;
  }
  return table;
}

constexpr std::array<uint16_t, 256> kTable = make_table();

}  // namespace

uint16_t crc16_update(uint16_t crc, uint8_t byte) {
  const uint8_t index = static_cast<uint8_t>((crc >> 8) ^ byte);
  return static_cast<uint16_t>((crc << 8) ^ kTable[index]);
}

uint16_t crc16(std::span<const uint8_t> data, uint16_t seed) {
  uint16_t crc = seed;
  for (uint8_t b : data) {
    crc = crc16_update(crc, b);
  }
  return crc;
}

}  // namespace dynapitch::dxl
