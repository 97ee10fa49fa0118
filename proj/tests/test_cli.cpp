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
//
// Spawns the real binary (path injected as CLI_BIN) and checks the
// documented exit-code and output contract.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult result;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    return result;
  }
  char buf[512];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.out.append(buf, n);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::string temp_dir(const std::string& tag) {
  return "/tmp/dynapitch_cli_" + tag + "_" + std::to_string(getpid());
}

const std::string kBin = CLI_BIN;
const std::string kGolden = GOLDEN_DIR;

}  // namespace

TEST_CASE("scan-bus output matches the golden table") {
  const RunResult r = run(kBin + " scan-bus --n 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(kGolden + "/scan_bus_4.txt"));

  const RunResult one = run(kBin + " scan-bus --n 1");
  CHECK(one.exit_code == 0);
  CHECK(one.out == "id model fw\n1 1060 44\n");

  const RunResult bad = run(kBin + " scan-bus --n 40");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("simulate writes byte-identical traces for equal seeds") {
  const std::string dir_a = temp_dir("a");
  const std::string dir_b = temp_dir("b");
  const RunResult a = run(kBin +
                          " simulate --scenario one_v_zero_goal --seed 7"
                          " --out " +
                          dir_a);
  const RunResult b = run(kBin +
                          " simulate --scenario one_v_zero_goal --seed 7"
                          " --out " +
                          dir_b);
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);

  const std::string trace_a = slurp(dir_a + "/trace.jsonl");
  const std::string trace_b = slurp(dir_b + "/trace.jsonl");
  REQUIRE(!trace_a.empty());
  CHECK(trace_a == trace_b);
  CHECK(slurp(dir_a + "/metrics.csv") == slurp(dir_b + "/metrics.csv"));

  // CSV has the documented header and one row.
  std::istringstream csv(slurp(dir_a + "/metrics.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header ==
        "scenario,seed,time_to_ball,sprint_time_4m,slalom_time,"
        "kick_distance,trace_hash");
  CHECK(row.rfind("one_v_zero_goal,7,", 0) == 0);
}

TEST_CASE("sprint CSV lands in the analytic window") {
  const std::string dir = temp_dir("sprint");
  const RunResult r =
      run(kBin + " simulate --scenario sprint --out " + dir);
  CHECK(r.exit_code == 0);
  std::istringstream csv(slurp(dir + "/metrics.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  // sprint_time_4m is the fourth column.
  std::istringstream cells(row);
  std::string cell;
  for (int i = 0; i < 4; ++i) std::getline(cells, cell, ',');
  const double sprint_time = std::stod(cell);
  CHECK(sprint_time >= 1.708);
  CHECK(sprint_time <= 2.05);
}

TEST_CASE("exit codes follow the contract") {
  CHECK(run(kBin + " simulate --scenario no_such").exit_code == 1);
  CHECK(run(kBin + " simulate --scenario sprint --duration 0.3").exit_code ==
        2);
  CHECK(run(kBin + " simulate --config /no/such/file.json").exit_code == 1);
  CHECK(run(kBin + " kick-sweep --vcap-max -5").exit_code == 1);
  CHECK(run(kBin + " packet decode zz").exit_code == 1);
  CHECK(run(kBin + " nonsense").exit_code == 1);
}

TEST_CASE("packet tool roundtrips and flags corruption") {
  const RunResult enc = run(kBin + " packet encode --id 1 --ping");
  CHECK(enc.exit_code == 0);
  std::string hex = enc.out;
  while (!hex.empty() && (hex.back() == '\n' || hex.back() == ' ')) {
    hex.pop_back();
  }
  const RunResult dec = run(kBin + " packet decode \"" + hex + "\"");
  CHECK(dec.exit_code == 0);
  CHECK(dec.out.find("instruction id=1") != std::string::npos);
  CHECK(dec.out.find("ping") != std::string::npos);

  // Flip the last CRC nibble.
  std::string bad = hex;
  bad.back() = bad.back() == '0' ? '1' : '0';
  const RunResult corrupt = run(kBin + " packet decode \"" + bad + "\"");
  CHECK(corrupt.exit_code == 3);
  CHECK(corrupt.out.find("crc") != std::string::npos);

  const RunResult write = run(
      kBin + " packet encode --id 1 --write 116 --value 1500 --size 4");
  CHECK(write.exit_code == 0);
  CHECK(write.out.find("74 00 dc 05") != std::string::npos);
}

TEST_CASE("kick-sweep emits the closed-form table") {
  const RunResult r = run(kBin + " kick-sweep");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("v_cap,eta,ball_speed\n", 0) == 0);
  CHECK(r.out.find("0.000000,0.020000,0.000000000") != std::string::npos);
  CHECK(r.out.find("190.000000,0.020000,5.876260272") != std::string::npos);
}

TEST_CASE("config file, env fallback, and flag precedence") {
  const std::string cfg_path = temp_dir("cfg") + ".json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"scenario": "sprint", "duration": 0.3})";
  }

  // Config alone: the 0.3 s cap times the sprint out.
  CHECK(run(kBin + " simulate --config " + cfg_path).exit_code == 2);

  // Same through the environment variable.
  CHECK(run("DYNAPITCH_CONFIG=" + cfg_path + " " + kBin + " simulate")
            .exit_code == 2);

  // Flags win over the config body.
  CHECK(run(kBin + " simulate --config " + cfg_path + " --duration 30")
            .exit_code == 0);

  // Malformed config body.
  const std::string bad_path = temp_dir("bad") + ".json";
  {
    std::ofstream bad(bad_path);
    bad << R"({"scenario": "sprint", "durtion": 1})";
  }
  CHECK(run(kBin + " simulate --config " + bad_path).exit_code == 1);
}
