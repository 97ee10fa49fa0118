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

#include "dynapitch/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynapitch/servo.hpp"

namespace dynapitch::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Fastest thing the model ever moves: the kick cap. Tunneling guard only.
constexpr double kMaxModeledSpeed = 6.5;

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

void FieldParams::validate() const {
  if (length <= 0.0 || width <= 0.0 || ball_decel <= 0.0 ||
      ball_radius <= 0.0 || robot_radius <= 0.0 || kick_gate_angle <= 0.0 ||
      kick_gate_gap <= 0.0 || physics_dt <= 0.0) {
    throw std::invalid_argument("field parameters must be positive");
  }
  if (physics_dt > 0.002) {
    throw std::invalid_argument("physics_dt must be at most 2 ms");
  }
  if (kMaxModeledSpeed * physics_dt >= ball_radius) {
    throw std::invalid_argument(
        "physics step too long: a fast ball could tunnel through contact");
  }
}

Robot make_robot(uint8_t id, double x, double y, double theta) {
  Robot robot;
  robot.id = id;
  robot.pose = {x, y, wrap_angle(theta)};
  for (uint8_t servo_id = 1; servo_id <= 4; ++servo_id) {
    auto& servo = robot.bus.add_servo(servo_id);
    servo.set_reg_value(dxl::reg::kOperatingMode, dxl::kModeVelocity);
    servo.set_reg_value(dxl::reg::kTorqueEnable, 1);
  }
  return robot;
}

Robot& find_robot(WorldState& world, uint8_t id) {
  for (auto& robot : world.robots) {
    if (robot.id == id) return robot;
  }
  throw SimulationFault("no robot with id " + std::to_string(id));
}

kin::BodyTwist robot_twist_from_servos(const Robot& robot,
                                       const kin::WheelConfig& cfg) {
  kin::WheelRates rates;
  for (uint8_t servo_id = 1; servo_id <= 4; ++servo_id) {
    const dxl::Servo* servo = robot.bus.find(servo_id);
    if (servo == nullptr) {
      throw SimulationFault("robot " + std::to_string(robot.id) +
                            " is missing servo " + std::to_string(servo_id));
    }
    const auto read = servo->table_read(dxl::reg::kPresentVelocity, 4);
    if (read.error != 0) {
      throw SimulationFault("present-velocity read failed on servo " +
                            std::to_string(servo_id));
    }
    uint32_t raw = 0;
    for (size_t i = 0; i < 4; ++i) {
      raw |= static_cast<uint32_t>(read.data[i]) << (8 * i);
    }
    rates.rates[servo_id - 1] =
        kin::from_dxl_units(static_cast<int32_t>(raw));
  }
  return kin::forward(rates, cfg).twist;
}

namespace {

void separate_discs(Vec2& a, Vec2& b, double min_dist, double heading,
                    bool move_a) {
  const Vec2 d{b.x - a.x, b.y - a.y};
  const double dist = norm(d);
  if (dist >= min_dist) return;

  Vec2 dir;
  if (dist > 1e-12) {
    dir = {d.x / dist, d.y / dist};
  } else {
    dir = {std::cos(heading), std::sin(heading)};
  }
  const double push = min_dist - dist;
  if (move_a) {
    a.x -= dir.x * push * 0.5;
    a.y -= dir.y * push * 0.5;
    b.x += dir.x * push * 0.5;
    b.y += dir.y * push * 0.5;
  } else {
    b.x += dir.x * push;
    b.y += dir.y * push;
  }
}

bool ball_in_gate(const Robot& robot, const Ball& ball,
                  const FieldParams& params) {
  const double dx = ball.pos.x - robot.pose.x;
  const double dy = ball.pos.y - robot.pose.y;
  const double dist = std::hypot(dx, dy);
  if (dist > params.robot_radius + params.ball_radius + params.kick_gate_gap) {
    return false;
  }
  const double bearing = std::atan2(dy, dx);
  return std::abs(wrap_angle(bearing - robot.pose.theta)) <=
         params.kick_gate_angle;
}

}  // namespace

void step(WorldState& world, const FieldParams& params,
          const kin::WheelConfig& cfg, double dt) {
  if (dt != params.physics_dt) {
    throw std::invalid_argument("step requires dt == physics_dt");
  }

  for (auto& robot : world.robots) {
    robot.bus.step_all(dt);
  }

  const double x_limit = params.length / 2.0 + params.robot_radius;
  const double y_limit = params.width / 2.0 + params.robot_radius;
  for (auto& robot : world.robots) {
    const auto twist = robot_twist_from_servos(robot, cfg);
    const double c = std::cos(robot.pose.theta);
    const double s = std::sin(robot.pose.theta);
    robot.pose.x += (c * twist.vx - s * twist.vy) * dt;
    robot.pose.y += (s * twist.vx + c * twist.vy) * dt;
    robot.pose.theta = wrap_angle(robot.pose.theta + twist.omega * dt);
    robot.pose.x = std::clamp(robot.pose.x, -x_limit, x_limit);
    robot.pose.y = std::clamp(robot.pose.y, -y_limit, y_limit);
  }

  if (!world.out_of_bounds) {
    const double speed = norm(world.ball.vel);
    if (speed > 0.0) {
      const double next = std::max(0.0, speed - params.ball_decel * dt);
      const double scale = next > 0.0 ? next / speed : 0.0;
      world.ball.vel.x *= scale;
      world.ball.vel.y *= scale;
    }
    world.ball.pos.x += world.ball.vel.x * dt;
    world.ball.pos.y += world.ball.vel.y * dt;
  }

  for (size_t i = 0; i < world.robots.size(); ++i) {
    for (size_t j = i + 1; j < world.robots.size(); ++j) {
      Vec2 a{world.robots[i].pose.x, world.robots[i].pose.y};
      Vec2 b{world.robots[j].pose.x, world.robots[j].pose.y};
      separate_discs(a, b, 2.0 * params.robot_radius,
                     world.robots[i].pose.theta, true);
      world.robots[i].pose.x = a.x;
      world.robots[i].pose.y = a.y;
      world.robots[j].pose.x = b.x;
      world.robots[j].pose.y = b.y;
    }
  }
  for (auto& robot : world.robots) {
    robot.pose.x = std::clamp(robot.pose.x, -x_limit, x_limit);
    robot.pose.y = std::clamp(robot.pose.y, -y_limit, y_limit);
  }
  for (auto& robot : world.robots) {
    Vec2 center{robot.pose.x, robot.pose.y};
    separate_discs(center, world.ball.pos,
                   params.robot_radius + params.ball_radius,
                   robot.pose.theta, false);
  }

  for (auto& robot : world.robots) {
    if (robot.dribble && ball_in_gate(robot, world.ball, params)) {
      const auto twist = robot_twist_from_servos(robot, cfg);
      const double c = std::cos(robot.pose.theta);
      const double s = std::sin(robot.pose.theta);
      world.ball.vel = {c * twist.vx - s * twist.vy,
                        s * twist.vx + c * twist.vy};
    }
  }

  if (!world.out_of_bounds &&
      (std::abs(world.ball.pos.x) > params.length / 2.0 ||
       std::abs(world.ball.pos.y) > params.width / 2.0)) {
    world.out_of_bounds = true;
    world.ball.vel = {0.0, 0.0};
  }

  world.t += dt;
}

bool attempt_kick(WorldState& world, const FieldParams& params,
                  const kicker::KickerParams& kparams, uint8_t robot_id,
                  double max_speed) {
  Robot& robot = find_robot(world, robot_id);
  if (!ball_in_gate(robot, world.ball, params)) return false;

  const auto kick = kicker::trigger(robot.kick, kparams, world.t);
  robot.kick = kick.state;
  const double speed = std::min(kick.ball_speed, max_speed);
  if (speed > 0.0) {
    world.ball.vel = {speed * std::cos(robot.pose.theta),
                      speed * std::sin(robot.pose.theta)};
  }
  return true;
}

}  // namespace dynapitch::sim
