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
#include <optional>

#include "dynapitch/field.hpp"
#include "dynapitch/net_codec.hpp"

namespace dynapitch::tac {

// Scripted control laws. All of them are pure functions of the most recent
// vision snapshot, so a run is reproducible from its inputs alone.
struct Gains {
  double kp = 2.0;      // 1/s toward the target point
  double komega = 4.0;  // 1/s onto the target heading
};

struct MotionLimits {
  double v_max = 3.0;      // m/s
  double omega_max = 10.0; // rad/s
};

struct AimKickConfig {
  double standoff = 0.15;           // m behind the ball on the goal line
  double align_tolerance = 0.05;    // rad
  double approach_tolerance = 0.05; // m around the standoff point
  double creep_speed = 0.3;         // m/s final approach
  double kick_speed = 6.5;          // m/s requested
  Gains gains;
  MotionLimits limits;
};

struct GoalkeeperConfig {
  double line_x = -4.2; // m, defended line
  double y_span = 0.5;  // m, half-width patrolled
  Gains gains;
  MotionLimits limits;
};

// SI views of a quantized vision frame.
std::optional<sim::Pose> frame_robot_pose(const net::VisionFrame& frame,
                                          uint8_t robot_id);
sim::Vec2 frame_ball(const net::VisionFrame& frame);

// Proportional drive toward `target` while turning to face `face`.
net::RobotCommand go_to_point(uint8_t robot_id, const sim::Pose& pose,
                              const sim::Vec2& target, const sim::Vec2& face,
                              const Gains& gains, const MotionLimits& limits);

net::RobotCommand go_to_ball(uint8_t robot_id, const sim::Pose& pose,
                             const sim::Vec2& ball, const Gains& gains,
                             const MotionLimits& limits);

// Point on the far side of the ball from the goal, where a shot lines up.
sim::Vec2 standoff_point(const sim::Vec2& ball, const sim::Vec2& goal,
                         double distance);

// Approach the standoff point, creep in along the shot line, and request a
// kick only once the heading error is inside the tolerance.
net::RobotCommand aim_and_kick(uint8_t robot_id, const sim::Pose& pose,
                               const sim::Vec2& ball, const sim::Vec2& goal,
                               const AimKickConfig& cfg);

// Hold a line segment in front of the goal, mirroring the ball's y.
net::RobotCommand goalkeeper(uint8_t robot_id, const sim::Pose& pose,
                             const sim::Vec2& ball,
                             const GoalkeeperConfig& cfg);

}  // namespace dynapitch::tac
