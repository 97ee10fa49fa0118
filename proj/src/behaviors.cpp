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

#include "dynapitch/behaviors.hpp"

#include <algorithm>
#include <cmath>

namespace dynapitch::tac {
namespace {

// Truncation keeps each wire component no larger than the clamped SI value,
// so integer commands stay inside the limits the doubles obeyed.
int16_t to_mm(double meters_per_s) {
  return static_cast<int16_t>(std::trunc(meters_per_s * 1000.0));
}

int16_t to_mrad(double rad_per_s) {
  return static_cast<int16_t>(std::trunc(rad_per_s * 1000.0));
}

net::RobotCommand make_command(uint8_t robot_id, double world_vx,
                               double world_vy, double heading_error,
                               const sim::Pose& pose, const Gains& gains,
                               const MotionLimits& limits) {
  const double speed = std::hypot(world_vx, world_vy);
  if (speed > limits.v_max) {
    const double scale = limits.v_max / speed;
    world_vx *= scale;
    world_vy *= scale;
  }
  const double omega =
      std::clamp(gains.komega * heading_error, -limits.omega_max,
                 limits.omega_max);

  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double body_vx = c * world_vx + s * world_vy;
  const double body_vy = -s * world_vx + c * world_vy;

  net::RobotCommand cmd;
  cmd.robot_id = robot_id;
  cmd.vx_mm_s = to_mm(body_vx);
  cmd.vy_mm_s = to_mm(body_vy);
  cmd.omega_mrad_s = to_mrad(omega);
  cmd.kick_mm_s = 0;
  cmd.flags = net::kFlagCharger;
  return cmd;
}

double heading_error_to(const sim::Pose& pose, const sim::Vec2& face) {
  const double dx = face.x - pose.x;
  const double dy = face.y - pose.y;
  if (std::hypot(dx, dy) < 1e-9) {
    return 0.0;
  }
  return sim::wrap_angle(std::atan2(dy, dx) - pose.theta);
}

}  // namespace

std::optional<sim::Pose> frame_robot_pose(const net::VisionFrame& frame,
                                          uint8_t robot_id) {
  for (const net::VisionRobot& r : frame.robots) {
    if (r.id == robot_id) {
      return sim::Pose{r.x_mm / 1000.0, r.y_mm / 1000.0,
                       r.theta_mrad / 1000.0};
    }
  }
  return std::nullopt;
}

sim::Vec2 frame_ball(const net::VisionFrame& frame) {
  return {frame.ball_x_mm / 1000.0, frame.ball_y_mm / 1000.0};
}

net::RobotCommand go_to_point(uint8_t robot_id, const sim::Pose& pose,
                              const sim::Vec2& target, const sim::Vec2& face,
                              const Gains& gains, const MotionLimits& limits) {
  const double world_vx = gains.kp * (target.x - pose.x);
  const double world_vy = gains.kp * (target.y - pose.y);
  return make_command(robot_id, world_vx, world_vy,
                      heading_error_to(pose, face), pose, gains, limits);
}

net::RobotCommand go_to_ball(uint8_t robot_id, const sim::Pose& pose,
                             const sim::Vec2& ball, const Gains& gains,
                             const MotionLimits& limits) {
  return go_to_point(robot_id, pose, ball, ball, gains, limits);
}

sim::Vec2 standoff_point(const sim::Vec2& ball, const sim::Vec2& goal,
                         double distance) {
  const double dx = ball.x - goal.x;
  const double dy = ball.y - goal.y;
  const double len = std::hypot(dx, dy);
  if (len < 1e-9) {
    return ball;
  }
  return {ball.x + distance * dx / len, ball.y + distance * dy / len};
}

net::RobotCommand aim_and_kick(uint8_t robot_id, const sim::Pose& pose,
                               const sim::Vec2& ball, const sim::Vec2& goal,
                               const AimKickConfig& cfg) {
  const sim::Vec2 spot = standoff_point(ball, goal, cfg.standoff);
  const double shot_heading =
      std::atan2(goal.y - ball.y, goal.x - ball.x);
  const double heading_error = sim::wrap_angle(shot_heading - pose.theta);
  const bool aligned = std::abs(heading_error) <= cfg.align_tolerance;

  const double dist_to_spot = std::hypot(spot.x - pose.x, spot.y - pose.y);
  const double dist_to_ball = std::hypot(ball.x - pose.x, ball.y - pose.y);

  net::RobotCommand cmd;
  if (dist_to_spot > cfg.approach_tolerance &&
      dist_to_ball > cfg.standoff + cfg.approach_tolerance) {
    const double world_vx = cfg.gains.kp * (spot.x - pose.x);
    const double world_vy = cfg.gains.kp * (spot.y - pose.y);
    cmd = make_command(robot_id, world_vx, world_vy, heading_error, pose,
                       cfg.gains, cfg.limits);
  } else {
    // Final approach: slide down the shot line at creep speed.
    const double world_vx = cfg.creep_speed * std::cos(shot_heading);
    const double world_vy = cfg.creep_speed * std::sin(shot_heading);
    cmd = make_command(robot_id, world_vx, world_vy, heading_error, pose,
                       cfg.gains, cfg.limits);
    if (aligned) {
      cmd.kick_mm_s =
          static_cast<uint16_t>(std::lround(cfg.kick_speed * 1000.0));
    }
  }
  return cmd;
}

net::RobotCommand goalkeeper(uint8_t robot_id, const sim::Pose& pose,
                             const sim::Vec2& ball,
                             const GoalkeeperConfig& cfg) {
  const sim::Vec2 target{cfg.line_x,
                         std::clamp(ball.y, -cfg.y_span, cfg.y_span)};
  return go_to_point(robot_id, pose, target, ball, cfg.gains, cfg.limits);
}

}  // namespace dynapitch::tac
