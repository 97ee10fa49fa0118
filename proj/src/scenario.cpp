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

#include "dynapitch/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "dynapitch/net_iface.hpp"

namespace dynapitch::tac {
namespace {

constexpr uint64_t kFnvPrime = 1099511628211ULL;

using Controller =
    std::function<std::vector<net::RobotCommand>(const net::VisionFrame&,
                                                 double)>;
using Probe = std::function<bool(const sim::WorldState&)>;

double dist(double ax, double ay, double bx, double by) {
  return std::hypot(ax - bx, ay - by);
}

}  // namespace

void RunConfig::validate() const {
  field.validate();
  if (std::find(scenario_names().begin(), scenario_names().end(), scenario) ==
      scenario_names().end()) {
    throw std::invalid_argument("unknown scenario: " + scenario);
  }
  if (!(duration > 0.0) || !(control_dt > 0.0)) {
    throw std::invalid_argument("duration and control_dt must be positive");
  }
  const double ratio = control_dt / field.physics_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    throw std::invalid_argument(
        "control_dt must be an integer multiple of physics_dt");
  }
  if (!(vision_rate_hz > 0.0) || vision_rate_hz > 1.0 / control_dt + 1e-9) {
    throw std::invalid_argument(
        "vision_rate_hz must be in (0, 1/control_dt]");
  }
  if (!kicker.valid()) {
    throw std::invalid_argument("kicker parameters out of range");
  }
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.wheels.gear_ratio = 14.0;
  return cfg;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "sprint", "slalom", "time_to_ball", "kick_distance", "one_v_zero_goal"};
  return names;
}

void TraceWriter::record(const sim::WorldState& world, uint64_t tick) {
  char buf[224];
  std::string line;
  std::snprintf(buf, sizeof buf,
                "{\"tick\":%llu,\"t\":%.6f,\"ball\":{\"x\":%.6f,\"y\":%.6f,"
                "\"vx\":%.6f,\"vy\":%.6f},\"robots\":[",
                static_cast<unsigned long long>(tick), world.t,
                world.ball.pos.x, world.ball.pos.y, world.ball.vel.x,
                world.ball.vel.y);
  line += buf;
  bool first = true;
  for (const sim::Robot& r : world.robots) {
    std::snprintf(buf, sizeof buf,
                  "%s{\"id\":%u,\"x\":%.6f,\"y\":%.6f,\"theta\":%.6f,"
                  "\"vcap\":%.3f}",
                  first ? "" : ",", r.id, r.pose.x, r.pose.y, r.pose.theta,
                  r.kick.v_cap);
    line += buf;
    first = false;
  }
  std::snprintf(buf, sizeof buf, "],\"oob\":%s}\n",
                world.out_of_bounds ? "true" : "false");
  line += buf;

  for (unsigned char c : line) {
    hash_ ^= c;
    hash_ *= kFnvPrime;
  }
  if (sink_ != nullptr) {
    sink_->write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  ++lines_;
}

std::string metrics_to_json(const MetricsReport& r) {
  char buf[512];
  std::snprintf(
      buf, sizeof buf,
      "{\"scenario\":\"%s\",\"seed\":%llu,\"time_to_ball\":%.6f,"
      "\"sprint_time_4m\":%.6f,\"slalom_time\":%.6f,\"kick_distance\":%.6f,"
      "\"trace_hash\":%llu,\"elapsed\":%.6f,\"out_of_bounds\":%s,"
      "\"failed\":%s}",
      r.scenario.c_str(), static_cast<unsigned long long>(r.seed),
      r.time_to_ball, r.sprint_time_4m, r.slalom_time, r.kick_distance,
      static_cast<unsigned long long>(r.trace_hash), r.elapsed,
      r.out_of_bounds ? "true" : "false", r.failed ? "true" : "false");
  return buf;
}

std::string metrics_csv_header() {
  return "scenario,seed,time_to_ball,sprint_time_4m,slalom_time,"
         "kick_distance,trace_hash";
}

std::string metrics_to_csv_row(const MetricsReport& r) {
  char buf[384];
  std::snprintf(buf, sizeof buf, "%s,%llu,%.6f,%.6f,%.6f,%.6f,%llu",
                r.scenario.c_str(), static_cast<unsigned long long>(r.seed),
                r.time_to_ball, r.sprint_time_4m, r.slalom_time,
                r.kick_distance,
                static_cast<unsigned long long>(r.trace_hash));
  return buf;
}

MetricsReport run_scenario(const RunConfig& cfg, std::ostream* trace_sink) {
  cfg.validate();

  MetricsReport report;
  report.scenario = cfg.scenario;
  report.seed = cfg.seed;

  sim::WorldState world;
  ctl::Bridge bridge(1, cfg.bridge, cfg.wheels, cfg.kicker);
  net::CommandQueue queue;
  net::VisionPublisher vision(cfg.vision_rate_hz);
  TraceWriter trace(trace_sink);

  Controller controller;
  Probe probe;
  const double reach =
      cfg.field.robot_radius + cfg.field.ball_radius + 0.005;

  if (cfg.scenario == "sprint") {
    world.robots.push_back(sim::make_robot(1, -4.0, 0.0, 0.0));
    world.ball.pos = {0.0, 2.5};
    controller = [](const net::VisionFrame&, double) {
      net::RobotCommand cmd;
      cmd.robot_id = 1;
      cmd.vx_mm_s = 3000;
      return std::vector<net::RobotCommand>{cmd};
    };
    probe = [&report](const sim::WorldState& w) {
      if (w.robots[0].pose.x >= 0.0) {
        report.sprint_time_4m = w.t;
        return true;
      }
      return false;
    };
  } else if (cfg.scenario == "slalom") {
    world.robots.push_back(sim::make_robot(1, -1.0, 0.0, 0.0));
    world.ball.pos = {4.0, 2.5};
    auto waypoints = std::make_shared<std::vector<sim::Vec2>>(
        std::vector<sim::Vec2>{
            {0.0, 0.0}, {1.0, 0.5}, {2.0, -0.5}, {3.0, 0.5}, {4.0, 0.0}});
    auto next = std::make_shared<size_t>(0);
    controller = [waypoints, next, &cfg](const net::VisionFrame& frame,
                                         double) {
      const auto pose = frame_robot_pose(frame, 1);
      if (!pose) {
        return std::vector<net::RobotCommand>{};
      }
      const size_t i = std::min(*next, waypoints->size() - 1);
      const sim::Vec2 target = (*waypoints)[i];
      return std::vector<net::RobotCommand>{
          go_to_point(1, *pose, target, target, cfg.gains, cfg.limits)};
    };
    probe = [waypoints, next, &report](const sim::WorldState& w) {
      const sim::Pose& p = w.robots[0].pose;
      while (*next < waypoints->size() &&
             dist(p.x, p.y, (*waypoints)[*next].x, (*waypoints)[*next].y) <=
                 0.1) {
        ++*next;
      }
      if (*next >= waypoints->size()) {
        report.slalom_time = w.t;
        return true;
      }
      return false;
    };
  } else if (cfg.scenario == "time_to_ball") {
    world.robots.push_back(sim::make_robot(1, -2.0, 0.0, 0.0));
    world.ball.pos = {0.0, 0.0};
    controller = [&cfg](const net::VisionFrame& frame, double) {
      const auto pose = frame_robot_pose(frame, 1);
      if (!pose) {
        return std::vector<net::RobotCommand>{};
      }
      return std::vector<net::RobotCommand>{
          go_to_ball(1, *pose, frame_ball(frame), cfg.gains, cfg.limits)};
    };
    probe = [reach, &report](const sim::WorldState& w) {
      const sim::Pose& p = w.robots[0].pose;
      if (dist(p.x, p.y, w.ball.pos.x, w.ball.pos.y) <= reach) {
        report.time_to_ball = w.t;
        return true;
      }
      return false;
    };
  } else if (cfg.scenario == "kick_distance") {
    world.robots.push_back(sim::make_robot(1, 0.0, 0.0, 0.0));
    world.ball.pos = {0.12, 0.0};
    const double t_kick = kicker::time_to_full(cfg.kicker) + 0.1;
    controller = [t_kick](const net::VisionFrame&, double t) {
      net::RobotCommand cmd;
      cmd.robot_id = 1;
      cmd.flags = net::kFlagCharger;
      if (t >= t_kick) {
        cmd.kick_mm_s = 6500;
      }
      return std::vector<net::RobotCommand>{cmd};
    };
    const sim::Vec2 ball_start = world.ball.pos;
    auto kicked = std::make_shared<bool>(false);
    probe = [kicked, ball_start, &report](const sim::WorldState& w) {
      const double speed = std::hypot(w.ball.vel.x, w.ball.vel.y);
      if (!*kicked) {
        *kicked = speed > 1e-9;
        return false;
      }
      if (w.out_of_bounds || speed == 0.0) {
        report.kick_distance =
            dist(w.ball.pos.x, w.ball.pos.y, ball_start.x, ball_start.y);
        return true;
      }
      return false;
    };
  } else if (cfg.scenario == "one_v_zero_goal") {
    world.robots.push_back(sim::make_robot(1, -2.0, 0.0, 0.0));
    world.ball.pos = {0.0, 0.0};
    const sim::Vec2 goal{cfg.field.length / 2.0, 0.0};
    controller = [goal, &cfg](const net::VisionFrame& frame, double) {
      const auto pose = frame_robot_pose(frame, 1);
      if (!pose) {
        return std::vector<net::RobotCommand>{};
      }
      return std::vector<net::RobotCommand>{
          aim_and_kick(1, *pose, frame_ball(frame), goal, cfg.aim)};
    };
    probe = [goal](const sim::WorldState& w) {
      return w.ball.pos.x >= goal.x && std::abs(w.ball.pos.y) <= 0.5;
    };
  } else {
    throw std::invalid_argument("unknown scenario: " + cfg.scenario);
  }

  const int sub_steps =
      static_cast<int>(std::lround(cfg.control_dt / cfg.field.physics_dt));
  std::optional<net::VisionFrame> latest;
  uint64_t tick = 0;
  bool finished = false;

  while (!finished && world.t < cfg.duration - 1e-9) {
    trace.record(world, tick);
    if (auto frame = vision.poll(world)) {
      latest = *frame;
    }
    for (const net::RobotCommand& cmd : queue.drain()) {
      bridge.handle_command(cmd, world.t);
    }
    if (latest) {
      for (const net::RobotCommand& cmd : controller(*latest, world.t)) {
        queue.push(cmd);
      }
    }
    bridge.process_tick(world, cfg.field, world.t);
    for (int i = 0; i < sub_steps && !finished; ++i) {
      sim::step(world, cfg.field, cfg.wheels, cfg.field.physics_dt);
      finished = probe(world);
    }
    ++tick;
  }

  report.elapsed = world.t;
  report.out_of_bounds = world.out_of_bounds;
  report.failed = !finished;
  report.trace_hash = trace.hash();
  return report;
}

namespace {

using nlohmann::json;

double as_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw std::runtime_error("config key '" + key + "' must be a number");
  }
  return value.get<double>();
}

// Dispatch table per object so typos in config files fail loudly.
template <typename Setter>
void parse_object(const json& obj, const std::string& name,
                  const Setter& set) {
  if (!obj.is_object()) {
    throw std::runtime_error("config key '" + name + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!set(key, value)) {
      throw std::runtime_error("unknown config key '" + name + "." + key +
                               "'");
    }
  }
}

}  // namespace

RunConfig load_run_config(const std::string& json_text) {
  RunConfig cfg = default_run_config();
  json root = json::parse(json_text);
  if (!root.is_object()) {
    throw std::runtime_error("config root must be a JSON object");
  }

  bool bridge_dt_set = false;
  for (const auto& [key, value] : root.items()) {
    if (key == "scenario") {
      if (!value.is_string()) {
        throw std::runtime_error("config key 'scenario' must be a string");
      }
      cfg.scenario = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        throw std::runtime_error("config key 'seed' must be an integer");
      }
      cfg.seed = value.get<uint64_t>();
    } else if (key == "duration") {
      cfg.duration = as_number(value, key);
    } else if (key == "control_dt") {
      cfg.control_dt = as_number(value, key);
    } else if (key == "vision_rate_hz") {
      cfg.vision_rate_hz = as_number(value, key);
    } else if (key == "field") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "length") cfg.field.length = as_number(v, k);
        else if (k == "width") cfg.field.width = as_number(v, k);
        else if (k == "ball_decel") cfg.field.ball_decel = as_number(v, k);
        else if (k == "ball_radius") cfg.field.ball_radius = as_number(v, k);
        else if (k == "robot_radius") cfg.field.robot_radius = as_number(v, k);
        else if (k == "kick_gate_angle")
          cfg.field.kick_gate_angle = as_number(v, k);
        else if (k == "kick_gate_gap")
          cfg.field.kick_gate_gap = as_number(v, k);
        else if (k == "physics_dt") cfg.field.physics_dt = as_number(v, k);
        else return false;
        return true;
      });
    } else if (key == "wheels") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "wheel_angles") {
          if (!v.is_array() || v.size() != cfg.wheels.wheel_angles.size()) {
            throw std::runtime_error(
                "config key 'wheels.wheel_angles' must be an array of 4");
          }
          for (size_t i = 0; i < cfg.wheels.wheel_angles.size(); ++i) {
            cfg.wheels.wheel_angles[i] = as_number(v[i], k);
          }
        } else if (k == "chassis_radius") {
          cfg.wheels.chassis_radius = as_number(v, k);
        } else if (k == "wheel_radius") {
          cfg.wheels.wheel_radius = as_number(v, k);
        } else if (k == "gear_ratio") {
          cfg.wheels.gear_ratio = as_number(v, k);
        } else {
          return false;
        }
        return true;
      });
    } else if (key == "kicker") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "v_max") cfg.kicker.v_max = as_number(v, k);
        else if (k == "supply") cfg.kicker.supply = as_number(v, k);
        else if (k == "capacitance") cfg.kicker.capacitance = as_number(v, k);
        else if (k == "charge_current")
          cfg.kicker.charge_current = as_number(v, k);
        else if (k == "efficiency") cfg.kicker.efficiency = as_number(v, k);
        else if (k == "ball_mass") cfg.kicker.ball_mass = as_number(v, k);
        else if (k == "lockout") cfg.kicker.lockout = as_number(v, k);
        else return false;
        return true;
      });
    } else if (key == "bridge") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "v_max") cfg.bridge.v_max = as_number(v, k);
        else if (k == "omega_max") cfg.bridge.omega_max = as_number(v, k);
        else if (k == "accel_max") cfg.bridge.accel_max = as_number(v, k);
        else if (k == "angular_accel_max")
          cfg.bridge.angular_accel_max = as_number(v, k);
        else if (k == "staleness_timeout")
          cfg.bridge.staleness_timeout = as_number(v, k);
        else if (k == "kick_cap") cfg.bridge.kick_cap = as_number(v, k);
        else if (k == "control_dt") {
          cfg.bridge.control_dt = as_number(v, k);
          bridge_dt_set = true;
        } else {
          return false;
        }
        return true;
      });
    } else if (key == "gains") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "kp") cfg.gains.kp = as_number(v, k);
        else if (k == "komega") cfg.gains.komega = as_number(v, k);
        else return false;
        return true;
      });
    } else if (key == "limits") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "v_max") cfg.limits.v_max = as_number(v, k);
        else if (k == "omega_max") cfg.limits.omega_max = as_number(v, k);
        else return false;
        return true;
      });
    } else if (key == "aim") {
      parse_object(value, key, [&](const std::string& k, const json& v) {
        if (k == "standoff") cfg.aim.standoff = as_number(v, k);
        else if (k == "align_tolerance")
          cfg.aim.align_tolerance = as_number(v, k);
        else if (k == "approach_tolerance")
          cfg.aim.approach_tolerance = as_number(v, k);
        else if (k == "creep_speed") cfg.aim.creep_speed = as_number(v, k);
        else if (k == "kick_speed") cfg.aim.kick_speed = as_number(v, k);
        else return false;
        return true;
      });
    } else {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }

  if (!bridge_dt_set) {
    cfg.bridge.control_dt = cfg.control_dt;
  }
  cfg.aim.gains = cfg.gains;
  cfg.aim.limits = cfg.limits;
  return cfg;
}

}  // namespace dynapitch::tac
