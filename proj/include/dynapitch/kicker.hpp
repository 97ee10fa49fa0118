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

namespace dynapitch::kicker {

// Capacitor-discharge kick chain: a boost charger fills the capacitor at
// constant current up to v_max; a relay dumps the full charge into the
// solenoid, converting a fraction eta of the stored energy into ball
// kinetic energy.
struct KickerParams {
  double v_max = 190.0;           // V
  double supply = 12.0;           // V, informational
  double capacitance = 2200e-6;   // F
  double charge_current = 0.5;    // A
  double efficiency = 0.02;       // stored energy -> ball energy
  double ball_mass = 0.046;       // kg
  double lockout = 0.05;          // s between discharges

  bool valid() const;
};

struct KickerState {
  double v_cap = 0.0;
  bool charging = false;
  double lockout_until = 0.0;  // simulation clock, seconds
};

struct KickResult {
  double ball_speed = 0.0;  // m/s
  KickerState state;
};

// Constant-current charging, frozen outside the charging flag and during
// the post-kick lockout. Saturates at v_max.
KickerState charge_step(const KickerState& state, const KickerParams& params,
                        double now, double dt);

// Full discharge: speed = sqrt(2 eta E / m) with E = C v_cap^2 / 2. During
// lockout the state is returned untouched and the speed is zero.
KickResult trigger(const KickerState& state, const KickerParams& params,
                   double now);

// Seconds of charging from empty to v_max: C v_max / I. Throws
// std::invalid_argument on invalid params.
double time_to_full(const KickerParams& params);

}  // namespace dynapitch::kicker
