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

#include <array>
#include <cstdint>

namespace dynapitch::kin {

// Chassis velocity in the robot frame: x forward, y left, counterclockwise
// positive.
struct BodyTwist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
};

// Four-wheel omnidirectional layout. Wheel i sits on the chassis circle at
// wheel_angles[i] from robot forward, rolling tangentially. gear_ratio is a
// speed multiplication: wheel rate = gear_ratio * motor rate.
struct WheelConfig {
  std::array<double, 4> wheel_angles{0.785398163397448,    // 45 deg
                                     2.356194490192345,    // 135 deg
                                     3.926990816987241,    // 225 deg
                                     5.497787143782138};   // 315 deg
  double chassis_radius = 0.08;  // m
  double wheel_radius = 0.027;   // m
  double gear_ratio = 1.5;
};

// Motor-shaft angular velocities, rad/s, wheel order 1..4.
struct WheelRates {
  std::array<double, 4> rates{};
};

struct ForwardResult {
  BodyTwist twist;
  // Euclidean norm of the rim-speed misfit (m/s); zero for any rate vector
  // produced by inverse().
  double residual = 0.0;
};

// Rim speed of wheel i: s_i = -sin(a_i) vx + cos(a_i) vy + R omega;
// motor rate = s_i / (r G). Linear in the twist.
WheelRates inverse(const BodyTwist& twist, const WheelConfig& cfg);

// Least-squares inversion via the normal equations of the 4x3 projection.
// Throws std::invalid_argument when the configuration is rank-deficient.
ForwardResult forward(const WheelRates& rates, const WheelConfig& cfg);

struct DxlUnits {
  int32_t units = 0;
  bool saturated = false;
};

// One unit is 0.229 rpm; results round to nearest and saturate at the
// +-265 register limit.
DxlUnits to_dxl_units(double rate_rad_s);
double from_dxl_units(int32_t units);

}  // namespace dynapitch::kin
