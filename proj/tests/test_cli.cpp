// Copyright 2026 The pap Authors
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

// End-to-end checks of the command-line binary: exit codes, error
// reporting, flag overrides, output layout, and byte reproducibility.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_root() {
  static const fs::path d = [] {
    fs::path r = fs::temp_directory_path() / "pap_test_cli";
    fs::remove_all(r);
    fs::create_directories(r);
    return r;
  }();
  return d;
}

// Runs the binary with PAP_OUTPUT_ROOT pointed at the scratch root.
CliResult run_cli(const std::string& args) {
  static int seq = 0;
  const fs::path of = work_root() / ("stdout." + std::to_string(seq));
  const fs::path ef = work_root() / ("stderr." + std::to_string(seq));
  ++seq;
  const std::string cmd = "PAP_OUTPUT_ROOT='" + work_root().string() +
                          "' '" + std::string(PAP_CLI_PATH) + "' " + args +
                          " > '" + of.string() + "' 2> '" + ef.string() +
                          "'";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(of);
  r.err = slurp(ef);
  return r;
}

std::string config(const std::string& name) {
  return "'" + std::string(PAP_CONFIG_DIR) + "/" + name + "'";
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = work_root() / name;
  std::ofstream(p) << body;
  return p;
}

// A light two-level run: resonant quarter-cycle, no chirp.
std::string tiny_config(const std::string& extra_propagation) {
  return std::string("{\n") +
         "  \"model\": {\n"
         "    \"ground_energy\": 0.0,\n"
         "    \"carrier\": 2.0,\n"
         "    \"levels\": [\n"
         "      {\"label\": 1, \"energy\": 2.0, \"dipole\": 1.0, "
         "\"kind\": \"target\"}\n"
         "    ],\n"
         "    \"target\": {\"labels\": [1], \"magnitudes\": [1.0], "
         "\"phases\": [0.0]}\n"
         "  },\n"
         "  \"pulse\": {\"sigma_omega\": 0.01},\n"
         "  \"drive\": {\"scale\": 0.25},\n"
         "  \"propagation\": {\"frame\": \"rotating\", \"samples\": 41" +
         extra_propagation + "}\n}\n";
}

}  // namespace

TEST_CASE("the binary requires a subcommand") {
  const auto r = run_cli("");
  CHECK(r.code != 0);
  CHECK(!r.err.empty());
}

TEST_CASE("validate prints a summary and ok") {
  const auto r = run_cli("validate " + config("run_demo.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("model hash ") != std::string::npos);
  CHECK(r.out.find("levels: 10 (6 target)") != std::string::npos);
  CHECK(r.out.find("half min spacing 0.0126") != std::string::npos);
  CHECK(r.out.find("pulse area ") != std::string::npos);
  CHECK(r.out.find("ok\n") != std::string::npos);
}

TEST_CASE("flag overrides reach the physics") {
  const auto base = run_cli("validate " + config("run_demo.json"));
  const auto scaled =
      run_cli("validate " + config("run_demo.json") + " --scale 0.28");
  const auto widened =
      run_cli("validate " + config("run_demo.json") + " --sigma-omega 0.02");
  CHECK(scaled.code == 0);
  CHECK(widened.code == 0);
  CHECK(base.out != scaled.out);
  CHECK(base.out != widened.out);
  // Doubling sigma with everything else fixed must warn about overlap.
  CHECK(widened.out.find("windows overlap") != std::string::npos);
  CHECK(base.out.find("windows overlap") == std::string::npos);
}

TEST_CASE("a config without a pulse section cannot propagate") {
  const auto p = write_config("no_pulse.json",
                              "{\n"
                              "  \"model_file\": \"" +
                                  std::string(PAP_CONFIG_DIR) +
                                  "/demo_model.json\",\n"
                                  "  \"drive\": {\"scale\": 0.5}\n"
                                  "}\n");
  const auto r = run_cli("propagate '" + p.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.err.find("config error") != std::string::npos);
  CHECK(r.err.find("pulse") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected by name") {
  const auto p = write_config("typo.json",
                              "{\n"
                              "  \"model_file\": \"" +
                                  std::string(PAP_CONFIG_DIR) +
                                  "/demo_model.json\",\n"
                                  "  \"plse\": {\"sigma_omega\": 0.01}\n"
                                  "}\n");
  const auto r = run_cli("validate '" + p.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.err.find("plse") != std::string::npos);
  CHECK(r.err.find("unknown key") != std::string::npos);
}

TEST_CASE("a missing config file is caught by the parser front end") {
  const auto r = run_cli("validate /no/such/file.json");
  CHECK(r.code != 0);
  CHECK(!r.err.empty());
}

TEST_CASE("an invalid frame name is a config error") {
  const auto p = write_config("tiny_frame.json", tiny_config(""));
  const auto r =
      run_cli("propagate '" + p.string() + "' --frame sideways");
  CHECK(r.code == 2);
  CHECK(r.err.find("frame") != std::string::npos);
}

TEST_CASE("fixed-step propagation is byte-reproducible") {
  const auto p = write_config("tiny.json", tiny_config(""));
  const auto r1 = run_cli("propagate '" + p.string() +
                          "' --fixed-step --out fx1");
  const auto r2 = run_cli("propagate '" + p.string() +
                          "' --fixed-step --out fx2");
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r1.out.find("transferred ") != std::string::npos);
  const std::string t1 = slurp(work_root() / "fx1" / "trajectory.csv");
  const std::string t2 = slurp(work_root() / "fx2" / "trajectory.csv");
  REQUIRE(!t1.empty());
  CHECK(t1 == t2);
  const std::string m1 = slurp(work_root() / "fx1" / "manifest.json");
  const std::string m2 = slurp(work_root() / "fx2" / "manifest.json");
  REQUIRE(!m1.empty());
  CHECK(m1 == m2);
  // The one wall-clock field is omitted on the reproducible path.
  CHECK(m1.find("wall_time_ms") == std::string::npos);
  CHECK(m1.find("\"failed\": false") != std::string::npos);
  // The quarter-cycle pulse moves everything out of the ground state.
  const auto manifest = nlohmann::json::parse(m1);
  CHECK(manifest.at("results").at("transferred").get<double>() > 0.999);
  CHECK(manifest.at("results").at("ground_final").get<double>() < 1e-6);
  CHECK(manifest.at("command").get<std::string>() == "propagate");
}

TEST_CASE("adaptive runs record wall time and land in named directories") {
  const auto p = write_config("tiny2.json", tiny_config(""));
  const auto r = run_cli("propagate '" + p.string() + "'");
  REQUIRE(r.code == 0);
  // Default directory name: command plus config stem, under the root.
  const fs::path dir = work_root() / "propagate-tiny2";
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "adiabatic.csv"));
  CHECK(fs::exists(dir / "metrics.json"));
  CHECK(fs::exists(dir / "populations.svg"));
  CHECK(slurp(dir / "manifest.json").find("wall_time_ms") !=
        std::string::npos);
}

TEST_CASE("an impossible tolerance fails loudly and leaves a marker") {
  const auto p = write_config(
      "doomed.json", tiny_config(", \"rtol\": 1e-30, \"atol\": 1e-32"));
  const auto r = run_cli("propagate '" + p.string() + "' --out doomed");
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical failure") != std::string::npos);
  CHECK(fs::exists(work_root() / "doomed" / "failed"));
  const std::string m = slurp(work_root() / "doomed" / "manifest.json");
  CHECK(m.find("\"failed\": true") != std::string::npos);
  // The partial trajectory is preserved for inspection.
  CHECK(fs::exists(work_root() / "doomed" / "trajectory.csv"));
}

TEST_CASE("shape reports the sub-pulse train of the comb") {
  const auto r = run_cli("shape " + config("run_comb.json") +
                         " --out combshape");
  REQUIRE(r.code == 0);
  const fs::path dir = work_root() / "combshape";
  const std::string features = slurp(dir / "features.csv");
  REQUIRE(!features.empty());
  // Header plus one row per sub-pulse.
  const auto rows = std::count(features.begin(), features.end(), '\n');
  CHECK(rows == 20);
  const std::string m = slurp(dir / "manifest.json");
  CHECK(m.find("\"sub_pulses\": 19") != std::string::npos);
  CHECK(m.find("phase_curvature_rad") != std::string::npos);
  CHECK(fs::exists(dir / "envelope.svg"));
}

TEST_CASE("bloch runs the piecewise rotation model") {
  const auto r = run_cli("bloch " + config("bloch_demo.json") +
                         " --out blochdemo");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("final z ") != std::string::npos);
  const fs::path dir = work_root() / "blochdemo";
  CHECK(fs::exists(dir / "schedule.csv"));
  CHECK(fs::exists(dir / "bloch_path.csv"));
  CHECK(fs::exists(dir / "bloch_path.svg"));
  const std::string m = slurp(dir / "manifest.json");
  CHECK(m.find("final_z") != std::string::npos);
  CHECK(m.find("piecewise_regime") != std::string::npos);
}

TEST_CASE("scan writes matrices whose shape matches the axes") {
  const auto p = write_config(
      "miniscan.json",
      "{\n"
      "  \"model_file\": \"" +
          std::string(PAP_CONFIG_DIR) +
          "/demo_model.json\",\n"
          "  \"pulse\": {\"sigma_omega\": 0.0076},\n"
          "  \"drive\": {\"scale\": 0.56},\n"
          "  \"propagation\": {\"frame\": \"rotating\", \"samples\": 2,\n"
          "                    \"rtol\": 1e-8, \"atol\": 1e-10},\n"
          "  \"scan\": {\"kind\": \"grid\",\n"
          "             \"alphas\": {\"min\": -2e5, \"max\": 2e5, "
          "\"count\": 3},\n"
          "             \"scales\": {\"min\": 0.28, \"max\": 0.56, "
          "\"count\": 2},\n"
          "             \"workers\": 2}\n"
          "}\n");
  const auto r = run_cli("scan '" + p.string() + "' --out miniscan");
  REQUIRE(r.code == 0);
  const fs::path dir = work_root() / "miniscan";
  const std::string t = slurp(dir / "transferred.csv");
  REQUIRE(!t.empty());
  // 1 header row + 3 alpha rows; 1 corner + 2 scale columns.
  CHECK(std::count(t.begin(), t.end(), '\n') == 4);
  const std::string first_line = t.substr(0, t.find('\n'));
  CHECK(std::count(first_line.begin(), first_line.end(), ',') == 2);
  CHECK(fs::exists(dir / "overlap.csv"));
  CHECK(fs::exists(dir / "transferred.svg"));
}

TEST_CASE("a scan command without a scan section is a config error") {
  const auto r = run_cli("scan " + config("run_demo.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("scan") != std::string::npos);
}
