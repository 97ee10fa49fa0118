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

#include "dynapitch/stream_parser.hpp"

#include <algorithm>
#include <array>

namespace dynapitch::dxl {

namespace {

constexpr std::array<uint8_t, 4> kHeader = {0xFF, 0xFF, 0xFD, 0x00};
constexpr size_t kNpos = static_cast<size_t>(-1);

// Position of the first full header, or npos.
size_t find_header(const std::vector<uint8_t>& buf) {
  if (buf.size() < kHeader.size()) {
    return kNpos;
  }
  auto it = std::search(buf.begin(), buf.end(), kHeader.begin(), kHeader.end());
  return it == buf.end() ? kNpos
                         : static_cast<size_t>(it - buf.begin());
}

// Length of the longest buffer suffix that is a proper prefix of the header.
// Those bytes may still become a header once more data arrives.
size_t header_prefix_suffix(const std::vector<uint8_t>& buf) {
  const size_t max_keep = std::min(buf.size(), kHeader.size() - 1);
  for (size_t keep = max_keep; keep > 0; --keep) {
    if (std::equal(buf.end() - static_cast<ptrdiff_t>(keep), buf.end(),
                   kHeader.begin())) {
      return keep;
    }
  }
  return 0;
}

}  // namespace

std::vector<ParseEvent> StreamParser::feed(std::span<const uint8_t> chunk) {
  buf_.insert(buf_.end(), chunk.begin(), chunk.end());
  std::vector<ParseEvent> events;

  for (;;) {
    const size_t at = find_header(buf_);
    if (at == kNpos) {
      // Everything except a possible header prefix at the tail is garbage.
      const size_t keep = header_prefix_suffix(buf_);
      const size_t drop = buf_.size() - keep;
      if (drop > 0) {
        pending_skip_ += drop;
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(drop));
      }
      break;
    }
    if (at > 0) {
      pending_skip_ += at;
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(at));
    }
    if (buf_.size() < kPreambleSize) {
      break;  // need id + length field
    }
    const size_t length = static_cast<size_t>(buf_[5]) |
                          (static_cast<size_t>(buf_[6]) << 8);
    if (length < 3 || kPreambleSize + length > kMaxFrameSize) {
      // Implausible length: not a real header. Skip one byte and rescan.
      pending_skip_ += 1;
      buf_.erase(buf_.begin());
      continue;
    }
    const size_t frame_size = kPreambleSize + length;
    if (buf_.size() < frame_size) {
      break;  // frame incomplete
    }
    if (pending_skip_ > 0) {
      events.push_back(DesyncEvent{pending_skip_});
      pending_skip_ = 0;
    }
    const std::span<const uint8_t> frame(buf_.data(), frame_size);
    if (auto pkt = decode_frame(frame)) {
      events.push_back(PacketEvent{std::move(*pkt)});
    } else {
      events.push_back(
          CrcErrorEvent{std::vector<uint8_t>(frame.begin(), frame.end())});
    }
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(frame_size));
  }
  return events;
}

}  // namespace dynapitch::dxl
