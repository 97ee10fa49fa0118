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
#include <variant>
#include <vector>

#include "dynapitch/packet.hpp"

namespace dynapitch::dxl {

struct PacketEvent {
  AnyPacket packet;
};

// Skipped garbage, reported once a new header lock is found. Count is > 0.
struct DesyncEvent {
  size_t skipped = 0;
};

// A framed region that failed validation: CRC mismatch, malformed stuffing,
// reserved id, or unknown instruction. Carries the raw frame bytes.
struct CrcErrorEvent {
  std::vector<uint8_t> frame;
};

using ParseEvent = std::variant<PacketEvent, DesyncEvent, CrcErrorEvent>;

// Incremental resynchronizing parser. Frames may be split at any byte
// boundary; concatenating the events over any chunking of the same stream
// yields the same packet sequence. FF FF FD 00 is the only header; length
// fields above kMaxFrameSize are treated as desync. After a corrupt frame
// the parser resumes hunting for the next header.
//
// Not thread-safe; use one parser per stream.
class StreamParser {
 public:
  std::vector<ParseEvent> feed(std::span<const uint8_t> chunk);

  // Garbage seen since the last header lock, not yet reported as an event.
  size_t pending_skip() const { return pending_skip_; }

 private:
  std::vector<uint8_t> buf_;
  size_t pending_skip_ = 0;
};

}  // namespace dynapitch::dxl
