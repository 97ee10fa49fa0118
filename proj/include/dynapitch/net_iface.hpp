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

#include <mutex>
#include <optional>
#include <vector>

#include "dynapitch/field.hpp"
#include "dynapitch/net_codec.hpp"

namespace dynapitch::net {

// Ordered handoff between command producers (UDP endpoint or in-process
// tactics) and the simulation loop, which drains it once per control tick.
class CommandQueue {
 public:
  void push(const RobotCommand& cmd);
  std::vector<RobotCommand> drain();

 private:
  std::mutex mutex_;
  std::vector<RobotCommand> pending_;
};

// Samples ground-truth frames from the simulation clock. poll() returns a
// frame whenever one is due at the world's current time, so a control loop
// polling at >= the publish rate sees exactly rate frames per simulated
// second, frame numbers dense and increasing.
class VisionPublisher {
 public:
  explicit VisionPublisher(double rate_hz = 60.0);

  std::optional<VisionFrame> poll(const sim::WorldState& world);

 private:
  double rate_hz_;
  uint32_t next_frame_no_ = 0;
};

// Quantizes world state to wire units (mm, mrad, us).
VisionFrame snapshot(const sim::WorldState& world, uint32_t frame_no);

}  // namespace dynapitch::net
