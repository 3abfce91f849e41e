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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pap/io.hpp"
#include "pap/model.hpp"

namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path d = fs::temp_directory_path() / "pap_test_io";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pap::LevelSystem<double> toy_system() {
  pap::LevelSystem<double> sys;
  sys.ground_energy = 0.0;
  sys.carrier = 2.0;
  sys.levels = {pap::Level<double>{1, 2.0, 1.0, pap::LevelKind::target}};
  return sys;
}

}  // namespace

TEST_CASE("format_real uses 12 significant digits") {
  CHECK(pap::cli::format_real(0.1) == "0.1");
  CHECK(pap::cli::format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(pap::cli::format_real(-2.5e-11) == "-2.5e-11");
  CHECK(pap::cli::format_real(12345.0) == "12345");
  CHECK(pap::cli::format_real(2.9524319236815884) == "2.95243192368");
  CHECK(pap::cli::format_real(0.0) == "0");
}

TEST_CASE("fnv64 matches the published 64-bit FNV-1a vectors") {
  CHECK(pap::cli::fnv64("") == 14695981039346656037ULL);
  CHECK(pap::cli::fnv64("a") == 12638187200555641996ULL);
  CHECK(pap::cli::fnv64("foobar") == 9625390261332436968ULL);
}

TEST_CASE("model_hash is stable and sensitive to every physical field") {
  const auto sys = toy_system();
  const auto h = pap::cli::model_hash(sys);
  CHECK(h == 4974199873773931790ULL);  // frozen
  CHECK(pap::cli::model_hash(toy_system()) == h);
  auto m = toy_system();
  m.ground_energy = 0.5;
  CHECK(pap::cli::model_hash(m) != h);
  m = toy_system();
  m.carrier = 2.1;
  CHECK(pap::cli::model_hash(m) != h);
  m = toy_system();
  m.levels[0].energy = 2.2;
  CHECK(pap::cli::model_hash(m) != h);
  m = toy_system();
  m.levels[0].dipole = 0.9;
  CHECK(pap::cli::model_hash(m) != h);
  m = toy_system();
  m.levels[0].label = 2;
  CHECK(pap::cli::model_hash(m) != h);
  m = toy_system();
  m.levels[0].kind = pap::LevelKind::spectator;
  CHECK(pap::cli::model_hash(m) != h);
}

TEST_CASE("write_csv_columns emits the exact golden bytes") {
  const fs::path f = test_dir() / "cols.csv";
  pap::RealVector<double> a(3), b(3);
  a << 0.1, -2.0, 1e-5;
  b << 1.0 / 3.0, 4.0, -0.25;
  pap::cli::write_csv_columns(f, {"x", "y"}, {&a, &b});
  CHECK(slurp(f) ==
        "x,y\n"
        "0.1,0.333333333333\n"
        "-2,4\n"
        "1e-05,-0.25\n");
  // Rewriting produces identical bytes.
  const std::string first = slurp(f);
  pap::cli::write_csv_columns(f, {"x", "y"}, {&a, &b});
  CHECK(slurp(f) == first);
  pap::RealVector<double> ragged(2);
  ragged << 1, 2;
  CHECK_THROWS_AS(pap::cli::write_csv_columns(f, {"x", "y"}, {&a, &ragged}),
                  pap::ConfigError);
  CHECK_THROWS_AS(pap::cli::write_csv_columns(f, {"x"}, {&a, &b}),
                  pap::ConfigError);
  CHECK_THROWS_AS(pap::cli::write_csv_columns(f, {}, {}), pap::ConfigError);
}

TEST_CASE("write_csv_matrix emits axes and the corner label") {
  const fs::path f = test_dir() / "mat.csv";
  pap::RealVector<double> rows(2), cols(3);
  rows << 0.5, 1.0;
  cols << 1, 2, 3;
  pap::RealMatrix<double> m(2, 3);
  m << 1, 2, 3, 4, 5, 6.25;
  pap::cli::write_csv_matrix(f, "T", rows, cols, m);
  CHECK(slurp(f) ==
        "T,1,2,3\n"
        "0.5,1,2,3\n"
        "1,4,5,6.25\n");
  CHECK_THROWS_AS(pap::cli::write_csv_matrix(f, "T", cols, rows, m),
                  pap::ConfigError);
}

TEST_CASE("write_manifest pretty-prints with sorted keys") {
  const fs::path f = test_dir() / "manifest.json";
  nlohmann::json j;
  j["beta"] = 1;
  j["alpha"]["x"] = {1.5, 2.0};
  pap::cli::write_manifest(f, j);
  CHECK(slurp(f) ==
        "{\n"
        "  \"alpha\": {\n"
        "    \"x\": [\n"
        "      1.5,\n"
        "      2.0\n"
        "    ]\n"
        "  },\n"
        "  \"beta\": 1\n"
        "}\n");
}

TEST_CASE("output_root honors the environment override") {
  setenv("PAP_OUTPUT_ROOT", "/tmp/pap_somewhere", 1);
  CHECK(pap::cli::output_root() == fs::path("/tmp/pap_somewhere"));
  unsetenv("PAP_OUTPUT_ROOT");
  CHECK(pap::cli::output_root() == fs::path("out"));
}

TEST_CASE("svg emitters produce self-contained stable files") {
  const fs::path hm = test_dir() / "heat.svg";
  pap::RealVector<double> rows(2), cols(3), x(4);
  rows << 0.0, 1.0;
  cols << -1, 0, 1;
  x << 0, 1, 2, 3;
  pap::RealMatrix<double> m(2, 3);
  m << 0, 0.5, 1, 1, 0.25, 0;
  pap::cli::write_svg_heatmap(hm, "map title", "xs", "ys", "value", rows,
                              cols, m, false);
  const std::string heat = slurp(hm);
  CHECK(heat.rfind("<svg", 0) == 0);
  CHECK(heat.find("map title") != std::string::npos);
  CHECK(heat.find("</svg>") != std::string::npos);
  CHECK(heat.find("http://www.w3.org/2000/svg") != std::string::npos);
  pap::cli::write_svg_heatmap(hm, "map title", "xs", "ys", "value", rows,
                              cols, m, false);
  CHECK(slurp(hm) == heat);
  // The cyclic palette differs from the sequential one.
  pap::cli::write_svg_heatmap(hm, "map title", "xs", "ys", "value", rows,
                              cols, m, true);
  CHECK(slurp(hm) != heat);
  CHECK_THROWS_AS(pap::cli::write_svg_heatmap(hm, "t", "x", "y", "v", cols,
                                              rows, m, false),
                  pap::ConfigError);

  const fs::path ln = test_dir() / "lines.svg";
  pap::RealVector<double> s1(4), s2(4);
  s1 << 0, 1, 0.5, 0.25;
  s2 << 1, 0.5, 0.25, 0;
  pap::cli::write_svg_lines(ln, "series title", "t", "p", x,
                            {{"ground", s1}, {"excited", s2}});
  const std::string lines = slurp(ln);
  CHECK(lines.rfind("<svg", 0) == 0);
  CHECK(lines.find("series title") != std::string::npos);
  CHECK(lines.find("ground") != std::string::npos);
  CHECK(lines.find("excited") != std::string::npos);
  CHECK(lines.find("polyline") != std::string::npos);
  CHECK(lines.find("</svg>") != std::string::npos);
}

TEST_CASE("writers refuse unwritable destinations") {
  const fs::path bad = test_dir() / "no_such_dir" / "f.csv";
  pap::RealVector<double> a(1);
  a << 1;
  CHECK_THROWS_AS(pap::cli::write_csv_columns(bad, {"x"}, {&a}),
                  pap::ConfigError);
}
