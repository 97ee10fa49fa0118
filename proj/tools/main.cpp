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

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dynapitch/bridge.hpp"
#include "dynapitch/bus.hpp"
#include "dynapitch/kicker.hpp"
#include "dynapitch/net_iface.hpp"
#include "dynapitch/packet.hpp"
#include "dynapitch/scenario.hpp"
#include "dynapitch/servo.hpp"
#include "dynapitch/stream_parser.hpp"
#include "dynapitch/udp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitScenarioFailed = 2;
constexpr int kExitDecodeFailed = 3;

std::string joined_scenarios() {
  std::string out;
  for (const std::string& name : dynapitch::tac::scenario_names()) {
    if (!out.empty()) {
      out += ", ";
    }
    out += name;
  }
  return out;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::optional<std::vector<uint8_t>> parse_hex(const std::string& text) {
  std::string digits;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      return std::nullopt;
    }
    digits += c;
  }
  if (digits.empty() || digits.size() % 2 != 0) {
    return std::nullopt;
  }
  std::vector<uint8_t> bytes;
  bytes.reserve(digits.size() / 2);
  for (size_t i = 0; i < digits.size(); i += 2) {
    bytes.push_back(static_cast<uint8_t>(
        std::stoul(digits.substr(i, 2), nullptr, 16)));
  }
  return bytes;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  std::string out;
  char buf[4];
  for (size_t i = 0; i < bytes.size(); ++i) {
    std::snprintf(buf, sizeof buf, i + 1 < bytes.size() ? "%02x " : "%02x",
                  bytes[i]);
    out += buf;
  }
  return out;
}

struct SimulateArgs {
  std::string scenario;
  uint64_t seed = 0;
  std::string config_path;
  std::string out_dir;
  double duration = 0.0;
  bool serve = false;
  uint16_t cmd_port = dynapitch::net::kDefaultCommandPort;
  uint16_t vision_port = dynapitch::net::kDefaultVisionPort;
};

// Live sandbox: external UDP commands drive robot 1, vision streams back.
// Paced against the wall clock, so it is kept out of the scripted metrics.
int run_serve(dynapitch::tac::RunConfig cfg, const SimulateArgs& args) {
  namespace sim = dynapitch::sim;
  namespace net = dynapitch::net;
  namespace ctl = dynapitch::ctl;

  cfg.validate();
  sim::WorldState world;
  world.robots.push_back(sim::make_robot(1, -1.0, 0.0, 0.0));
  world.ball.pos = {0.0, 0.0};

  net::CommandQueue queue;
  net::UdpCommandReceiver receiver(args.cmd_port, queue);
  net::UdpVisionSender sender("127.0.0.1", args.vision_port);
  ctl::Bridge bridge(1, cfg.bridge, cfg.wheels, cfg.kicker);
  net::VisionPublisher vision(cfg.vision_rate_hz);

  const int sub_steps = static_cast<int>(
      std::lround(cfg.control_dt / cfg.field.physics_dt));
  std::fprintf(stderr,
               "serving: commands udp/%u, vision udp/%u, %.0f s cap\n",
               args.cmd_port, args.vision_port, cfg.duration);

  const auto start = std::chrono::steady_clock::now();
  while (world.t < cfg.duration - 1e-9) {
    if (auto frame = vision.poll(world)) {
      sender.send(*frame);
    }
    for (const net::RobotCommand& cmd : queue.drain()) {
      bridge.handle_command(cmd, world.t);
    }
    bridge.process_tick(world, cfg.field, world.t);
    for (int i = 0; i < sub_steps; ++i) {
      sim::step(world, cfg.field, cfg.wheels, cfg.field.physics_dt);
    }
    std::this_thread::sleep_until(
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(world.t)));
  }
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& args, const CLI::App& sub) {
  using dynapitch::tac::RunConfig;

  RunConfig cfg = dynapitch::tac::default_run_config();
  std::string config_path = args.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv("DYNAPITCH_CONFIG")) {
      config_path = env;
    }
  }
  if (!config_path.empty()) {
    const auto body = read_file(config_path);
    if (!body) {
      std::fprintf(stderr, "error: cannot read config file '%s'\n",
                   config_path.c_str());
      return kExitUsage;
    }
    try {
      cfg = dynapitch::tac::load_run_config(*body);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: bad config '%s': %s\n",
                   config_path.c_str(), e.what());
      return kExitUsage;
    }
  }

  if (sub.count("--scenario") > 0) {
    cfg.scenario = args.scenario;
  }
  if (sub.count("--seed") > 0) {
    cfg.seed = args.seed;
  }
  if (sub.count("--duration") > 0) {
    cfg.duration = args.duration;
  }

  const auto& names = dynapitch::tac::scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
    std::fprintf(stderr, "error: unknown scenario '%s' (valid: %s)\n",
                 cfg.scenario.c_str(), joined_scenarios().c_str());
    return kExitUsage;
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  if (args.serve) {
    return run_serve(cfg, args);
  }

  std::ofstream trace_file;
  std::ostream* trace_sink = nullptr;
  std::filesystem::path out_dir;
  if (!args.out_dir.empty()) {
    out_dir = args.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create output directory '%s'\n",
                   args.out_dir.c_str());
      return kExitUsage;
    }
    trace_file.open(out_dir / "trace.jsonl", std::ios::binary);
    if (!trace_file) {
      std::fprintf(stderr, "error: cannot open trace file in '%s'\n",
                   args.out_dir.c_str());
      return kExitUsage;
    }
    trace_sink = &trace_file;
  }

  const dynapitch::tac::MetricsReport report =
      dynapitch::tac::run_scenario(cfg, trace_sink);

  const std::string json = dynapitch::tac::metrics_to_json(report);
  std::printf("%s\n", json.c_str());

  if (!args.out_dir.empty()) {
    trace_file.close();
    std::ofstream mj(out_dir / "metrics.json", std::ios::binary);
    mj << json << "\n";
    std::ofstream mc(out_dir / "metrics.csv", std::ios::binary);
    mc << dynapitch::tac::metrics_csv_header() << "\n"
       << dynapitch::tac::metrics_to_csv_row(report) << "\n";
  }

  return report.failed ? kExitScenarioFailed : kExitOk;
}

int cmd_scan_bus(int n_servos) {
  namespace dxl = dynapitch::dxl;

  dxl::VirtualBus bus;
  for (int id = 1; id <= n_servos; ++id) {
    bus.add_servo(static_cast<uint8_t>(id));
  }
  const dxl::InstructionPacket ping{dxl::kBroadcastId,
                                    dxl::Instruction::Ping,
                                    {}};
  const auto replies = bus.transact(dxl::encode_instruction(ping));

  std::printf("id model fw\n");
  for (const auto& frame : replies) {
    const auto decoded = dxl::decode_frame(frame);
    if (!decoded) {
      continue;
    }
    const auto& status = std::get<dxl::StatusPacket>(*decoded);
    const unsigned model = status.params.size() >= 2
                               ? status.params[0] | (status.params[1] << 8)
                               : 0;
    const unsigned fw = status.params.size() >= 3 ? status.params[2] : 0;
    std::printf("%u %u %u\n", status.source_id, model, fw);
  }
  return kExitOk;
}

int cmd_packet_decode(const std::string& hex) {
  namespace dxl = dynapitch::dxl;

  const auto bytes = parse_hex(hex);
  if (!bytes) {
    std::fprintf(stderr, "error: malformed hex string\n");
    return kExitUsage;
  }

  dxl::StreamParser parser;
  const auto events = parser.feed(*bytes);
  bool printed = false;
  for (const auto& event : events) {
    if (const auto* pkt = std::get_if<dxl::PacketEvent>(&event)) {
      if (const auto* ins =
              std::get_if<dxl::InstructionPacket>(&pkt->packet)) {
        std::printf("instruction id=%u instruction=%s params=%zu\n",
                    ins->target_id,
                    dxl::instruction_name(ins->instruction),
                    ins->params.size());
      } else {
        const auto& st = std::get<dxl::StatusPacket>(pkt->packet);
        std::printf("status id=%u error=0x%02x params=%zu\n", st.source_id,
                    st.error, st.params.size());
      }
      printed = true;
    } else if (std::get_if<dxl::CrcErrorEvent>(&event)) {
      std::printf("parse error: crc mismatch\n");
      return kExitDecodeFailed;
    } else if (const auto* d = std::get_if<dxl::DesyncEvent>(&event)) {
      std::printf("parse error: desync, %zu bytes skipped\n", d->skipped);
    }
  }
  if (!printed) {
    std::printf("parse error: no complete packet\n");
    return kExitDecodeFailed;
  }
  return kExitOk;
}

int cmd_packet_encode(uint8_t id, bool ping, int write_addr, int64_t value,
                      int size) {
  namespace dxl = dynapitch::dxl;

  dxl::InstructionPacket packet;
  packet.target_id = id;
  if (ping) {
    packet.instruction = dxl::Instruction::Ping;
  } else {
    if (write_addr < 0 || size < 1 || size > 4) {
      std::fprintf(stderr,
                   "error: encode needs --ping or --write ADDR with "
                   "--size 1..4\n");
      return kExitUsage;
    }
    packet.instruction = dxl::Instruction::Write;
    packet.params.push_back(write_addr & 0xFF);
    packet.params.push_back((write_addr >> 8) & 0xFF);
    const auto raw = static_cast<uint64_t>(value);
    for (int i = 0; i < size; ++i) {
      packet.params.push_back((raw >> (8 * i)) & 0xFF);
    }
  }

  try {
    std::printf("%s\n", to_hex(dxl::encode_instruction(packet)).c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_kick_sweep(double vcap_lo, double vcap_hi, double vcap_step,
                   double eta_lo, double eta_hi, double eta_step) {
  namespace kicker = dynapitch::kicker;

  if (vcap_step <= 0.0 || eta_step <= 0.0 || vcap_hi < vcap_lo ||
      eta_hi < eta_lo || vcap_lo < 0.0 || eta_lo <= 0.0) {
    std::fprintf(stderr, "error: empty or invalid sweep range\n");
    return kExitUsage;
  }

  std::printf("v_cap,eta,ball_speed\n");
  for (double eta = eta_lo; eta <= eta_hi + 1e-12; eta += eta_step) {
    for (double v = vcap_lo; v <= vcap_hi + 1e-9; v += vcap_step) {
      kicker::KickerParams params;
      params.efficiency = eta;
      kicker::KickerState state;
      state.v_cap = std::min(v, params.v_max);
      const auto result = kicker::trigger(state, params, 0.0);
      std::printf("%.6f,%.6f,%.9f\n", state.v_cap, eta, result.ball_speed);
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynapitch: omniwheel soccer robot toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a scripted scenario");
  simulate->add_option("--scenario", sim_args.scenario,
                       "scenario name (" + joined_scenarios() + ")");
  simulate->add_option("--seed", sim_args.seed, "run seed");
  simulate->add_option("--config", sim_args.config_path,
                       "JSON config file (or env DYNAPITCH_CONFIG)");
  simulate->add_option("--out", sim_args.out_dir,
                       "directory for trace.jsonl, metrics.json, metrics.csv");
  simulate->add_option("--duration", sim_args.duration,
                       "simulated-seconds cap");
  simulate->add_flag("--serve", sim_args.serve,
                     "serve UDP command/vision endpoints instead");
  simulate->add_option("--cmd-port", sim_args.cmd_port,
                       "UDP port for inbound commands");
  simulate->add_option("--vision-port", sim_args.vision_port,
                       "UDP port for outbound vision");

  int scan_n = 4;
  CLI::App* scan = app.add_subcommand("scan-bus", "ping a virtual servo bus");
  scan->add_option("--n", scan_n, "servo count")->check(CLI::Range(1, 16));

  std::string decode_hex;
  uint8_t enc_id = 1;
  bool enc_ping = false;
  int enc_write_addr = -1;
  int64_t enc_value = 0;
  int enc_size = 4;
  CLI::App* packet = app.add_subcommand("packet", "encode or decode frames");
  packet->require_subcommand(1);
  CLI::App* pkt_decode =
      packet->add_subcommand("decode", "decode a hex frame");
  pkt_decode->add_option("hex", decode_hex, "frame bytes as hex")->required();
  CLI::App* pkt_encode =
      packet->add_subcommand("encode", "encode an instruction");
  pkt_encode->add_option("--id", enc_id, "target servo id");
  pkt_encode->add_flag("--ping", enc_ping, "encode a PING");
  pkt_encode->add_option("--write", enc_write_addr, "register address");
  pkt_encode->add_option("--value", enc_value, "register value");
  pkt_encode->add_option("--size", enc_size, "register width in bytes");

  double vcap_lo = 0.0, vcap_hi = 190.0, vcap_step = 10.0;
  double eta_lo = 0.02, eta_hi = 0.02, eta_step = 0.01;
  CLI::App* sweep =
      app.add_subcommand("kick-sweep", "tabulate kick speed vs charge");
  sweep->add_option("--vcap-min", vcap_lo, "lowest capacitor voltage");
  sweep->add_option("--vcap-max", vcap_hi, "highest capacitor voltage");
  sweep->add_option("--vcap-step", vcap_step, "voltage step");
  sweep->add_option("--eta-min", eta_lo, "lowest efficiency");
  sweep->add_option("--eta-max", eta_hi, "highest efficiency");
  sweep->add_option("--eta-step", eta_step, "efficiency step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim_args, *simulate);
    }
    if (scan->parsed()) {
      return cmd_scan_bus(scan_n);
    }
    if (packet->parsed()) {
      if (pkt_decode->parsed()) {
        return cmd_packet_decode(decode_hex);
      }
      return cmd_packet_encode(enc_id, enc_ping, enc_write_addr, enc_value,
                               enc_size);
    }
    if (sweep->parsed()) {
      return cmd_kick_sweep(vcap_lo, vcap_hi, vcap_step, eta_lo, eta_hi,
                            eta_step);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
