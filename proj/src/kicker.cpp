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

#include "dynapitch/kicker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynapitch::kicker {

bool KickerParams::valid() const {
  return capacitance > 0.0 && charge_current > 0.0 && efficiency > 0.0 &&
         efficiency <= 1.0 && ball_mass > 0.0 && v_max > 0.0 && lockout >= 0.0;
}

KickerState charge_step(const KickerState& state, const KickerParams& params,
                        double now, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (!state.charging || now < state.lockout_until) return state;
  KickerState next = state;
  next.v_cap = std::min(params.v_max,
                        state.v_cap + params.charge_current * dt /
                                          params.capacitance);
  return next;
}

KickResult trigger(const KickerState& state, const KickerParams& params,
                   double now) {
  if (now < state.lockout_until) return {0.0, state};
  const double energy = 0.5 * params.capacitance * state.v_cap * state.v_cap;
  const double speed =
      std::sqrt(2.0 * params.efficiency * energy / params.ball_mass);
  KickerState next = state;
  next.v_cap = 0.0;
  next.lockout_until = now + params.lockout;
  return {speed, next};
}

double time_to_full(const KickerParams& params) {
  if (!params.valid()) {
    throw std::invalid_argument("kicker params out of range");
  }
  return params.capacitance * params.v_max / params.charge_current;
}

}  // namespace dynapitch::kicker
