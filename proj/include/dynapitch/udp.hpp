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

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>

#include "dynapitch/net_iface.hpp"

namespace dynapitch::net {

inline constexpr uint16_t kDefaultCommandPort = 10301;
inline constexpr uint16_t kDefaultVisionPort = 10302;

// Background receiver: binds a local UDP port and pushes every validly
// decoded command frame into the queue. Invalid datagrams are counted and
// dropped. Used by the serve mode only; deterministic runs feed the queue
// directly.
class UdpCommandReceiver {
 public:
  UdpCommandReceiver(uint16_t port, CommandQueue& queue);
  ~UdpCommandReceiver();

  UdpCommandReceiver(const UdpCommandReceiver&) = delete;
  UdpCommandReceiver& operator=(const UdpCommandReceiver&) = delete;

  uint64_t rejected_count() const { return rejected_.load(); }

 private:
  void run();

  int fd_ = -1;
  CommandQueue& queue_;
  std::atomic<bool> stop_{false};
  std::atomic<uint64_t> rejected_{0};
  std::thread thread_;
};

// Fire-and-forget vision frame sender.
class UdpVisionSender {
 public:
  UdpVisionSender(const std::string& host, uint16_t port);
  ~UdpVisionSender();

  UdpVisionSender(const UdpVisionSender&) = delete;
  UdpVisionSender& operator=(const UdpVisionSender&) = delete;

  void send(const VisionFrame& frame);

 private:
  int fd_ = -1;
};

}  // namespace dynapitch::net
