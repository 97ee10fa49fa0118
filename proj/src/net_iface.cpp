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

#include "dynapitch/net_iface.hpp"

#include <cmath>
#include <stdexcept>

namespace dynapitch::net {

void CommandQueue::push(const RobotCommand& cmd) {
  std::lock_guard<std::mutex> lock(mutex_);
  pending_.push_back(cmd);
}

std::vector<RobotCommand> CommandQueue::drain() {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<RobotCommand> out;
  out.swap(pending_);
  return out;
}

VisionPublisher::VisionPublisher(double rate_hz) : rate_hz_(rate_hz) {
  if (rate_hz <= 0.0) throw std::invalid_argument("rate must be positive");
}

std::optional<VisionFrame> VisionPublisher::poll(
    const sim::WorldState& world) {
  const double due = static_cast<double>(next_frame_no_) / rate_hz_;
  if (world.t + 1e-9 < due) return std::nullopt;
  VisionFrame frame = snapshot(world, next_frame_no_);
  ++next_frame_no_;
  return frame;
}

VisionFrame snapshot(const sim::WorldState& world, uint32_t frame_no) {
  VisionFrame frame;
  frame.frame_no = frame_no;
  frame.t_us = static_cast<uint64_t>(std::llround(world.t * 1e6));
  frame.ball_x_mm = static_cast<int32_t>(std::lround(world.ball.pos.x * 1e3));
  frame.ball_y_mm = static_cast<int32_t>(std::lround(world.ball.pos.y * 1e3));
  for (const auto& robot : world.robots) {
    VisionRobot out;
    out.id = robot.id;
    out.x_mm = static_cast<int32_t>(std::lround(robot.pose.x * 1e3));
    out.y_mm = static_cast<int32_t>(std::lround(robot.pose.y * 1e3));
    out.theta_mrad =
        static_cast<int16_t>(std::lround(robot.pose.theta * 1e3));
    frame.robots.push_back(out);
  }
  return frame;
}

}  // namespace dynapitch::net
