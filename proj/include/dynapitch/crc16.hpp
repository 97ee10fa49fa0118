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

#include <cstddef>
#include <cstdint>
#include <span>

namespace dynapitch::dxl {

// CRC-16 shared by the servo bus framing and the UDP codecs.
//
// Parameters:
// - Polynomial: 0x8005
// - Init:       0x0000
// - Reflect:    none
// - XorOut:     0x0000
//
// Test vector: "123456789" -> 0xFEE8
uint16_t crc16(std::span<const uint8_t> data, uint16_t seed = 0);

// Incremental form, one byte at a time.
uint16_t crc16_update(uint16_t crc, uint8_t byte);

}  // namespace dynapitch::dxl
