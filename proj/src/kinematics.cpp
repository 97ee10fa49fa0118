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

#include "dynapitch/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace dynapitch::kin {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kUnitRpm = 0.229;
constexpr int32_t kUnitLimit = 265;

void check_config(const WheelConfig& cfg) {
  if (cfg.wheel_radius <= 0.0 || cfg.chassis_radius <= 0.0 ||
      cfg.gear_ratio <= 0.0) {
    throw std::invalid_argument("wheel configuration must be positive");
  }
}

}  // namespace

WheelRates inverse(const BodyTwist& twist, const WheelConfig& cfg) {
  check_config(cfg);
  WheelRates out;
  const double scale = 1.0 / (cfg.wheel_radius * cfg.gear_ratio);
  for (int i = 0; i < 4; ++i) {
    const double a = cfg.wheel_angles[i];
    const double rim = -std::sin(a) * twist.vx + std::cos(a) * twist.vy +
                       cfg.chassis_radius * twist.omega;
    out.rates[i] = rim * scale;
  }
  return out;
}

ForwardResult forward(const WheelRates& rates, const WheelConfig& cfg) {
  check_config(cfg);

  // Rows of the 4x3 projection and the rim-speed observations.
  double row[4][3];
  double b[4];
  for (int i = 0; i < 4; ++i) {
    const double a = cfg.wheel_angles[i];
    row[i][0] = -std::sin(a);
    row[i][1] = std::cos(a);
    row[i][2] = cfg.chassis_radius;
    b[i] = rates.rates[i] * cfg.wheel_radius * cfg.gear_ratio;
  }

  double n[3][3] = {};
  double rhs[3] = {};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      rhs[j] += row[i][j] * b[i];
      for (int k = 0; k < 3; ++k) n[j][k] += row[i][j] * row[i][k];
    }
  }

  const double det = n[0][0] * (n[1][1] * n[2][2] - n[1][2] * n[2][1]) -
                     n[0][1] * (n[1][0] * n[2][2] - n[1][2] * n[2][0]) +
                     n[0][2] * (n[1][0] * n[2][1] - n[1][1] * n[2][0]);
  if (std::abs(det) < 1e-12) {
    throw std::invalid_argument("rank-deficient wheel configuration");
  }

  auto solve_col = [&](int col) {
    double m[3][3];
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) m[j][k] = (k == col) ? rhs[j] : n[j][k];
    }
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
           det;
  };

  ForwardResult out;
  out.twist = {solve_col(0), solve_col(1), solve_col(2)};

  double misfit = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double fit = row[i][0] * out.twist.vx + row[i][1] * out.twist.vy +
                       row[i][2] * out.twist.omega;
    misfit += (fit - b[i]) * (fit - b[i]);
  }
  out.residual = std::sqrt(misfit);
  return out;
}

DxlUnits to_dxl_units(double rate_rad_s) {
  const double rpm = rate_rad_s * 60.0 / (2.0 * kPi);
  const double units = rpm / kUnitRpm;
  const long rounded = std::lround(units);
  DxlUnits out;
  if (rounded > kUnitLimit) {
    out = {kUnitLimit, true};
  } else if (rounded < -kUnitLimit) {
    out = {-kUnitLimit, true};
  } else {
    out = {static_cast<int32_t>(rounded), false};
  }
  return out;
}

double from_dxl_units(int32_t units) {
  return static_cast<double>(units) * kUnitRpm * 2.0 * kPi / 60.0;
}

}  // namespace dynapitch::kin
