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
#include <limits>
#include <stdexcept>
#include <vector>

#include "dynapitch/bus.hpp"
#include "dynapitch/kicker.hpp"
#include "dynapitch/kinematics.hpp"

namespace dynapitch::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, counterclockwise from +x
};

// Field is centered at the origin: x spans [-length/2, length/2].
struct FieldParams {
  double length = 9.0;               // m
  double width = 6.0;                // m
  double ball_decel = 0.35;          // m/s^2 rolling friction
  double ball_radius = 0.0215;       // m
  double robot_radius = 0.09;        // m
  double kick_gate_angle = 0.2617993877991494;  // 15 degrees
  double kick_gate_gap = 0.01;       // m beyond touching distance
  double physics_dt = 0.001;         // s

  // Throws std::invalid_argument on nonpositive fields, physics_dt > 2 ms,
  // or a step length that could tunnel past the ball at modeled speeds.
  void validate() const;
};

struct Ball {
  Vec2 pos;
  Vec2 vel;
};

struct Robot {
  uint8_t id = 0;
  Pose pose;
  dxl::VirtualBus bus;  // four servos, ids 1..4
  kicker::KickerState kick;
  double last_command_time = -1.0;
  bool dribble = false;
};

struct WorldState {
  double t = 0.0;
  Ball ball;
  std::vector<Robot> robots;
  bool out_of_bounds = false;
};

// Raised when the world references hardware that is not there (missing
// servo, unknown robot id) or a bus interaction faults.
struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double wrap_angle(double a);  // into (-pi, pi]

// A robot with a freshly provisioned four-servo bank in velocity mode,
// torque enabled.
Robot make_robot(uint8_t id, double x, double y, double theta);

Robot& find_robot(WorldState& world, uint8_t id);

// Reads PresentVelocity from servos 1..4 and runs the forward kinematics.
// Throws SimulationFault when a servo is missing.
kin::BodyTwist robot_twist_from_servos(const Robot& robot,
                                       const kin::WheelConfig& cfg);

// One fixed physics step. dt must equal params.physics_dt. Order: servo
// dynamics, robot pose integration, ball friction and motion, disc overlap
// resolution (robots pairwise, then ball pushed out), dribble coupling,
// boundary freeze, clock advance.
void step(WorldState& world, const FieldParams& params,
          const kin::WheelConfig& cfg, double dt);

// True when the ball sits inside the kick gate (front-arc distance plus
// bearing window); on a pass the kicker discharges and the ball velocity is
// replaced by min(delivered, max_speed) along the robot heading. A gate
// pass during lockout still returns true but moves nothing.
bool attempt_kick(WorldState& world, const FieldParams& params,
                  const kicker::KickerParams& kparams, uint8_t robot_id,
                  double max_speed = std::numeric_limits<double>::infinity());

}  // namespace dynapitch::sim
