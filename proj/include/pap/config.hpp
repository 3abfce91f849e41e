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

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pap/analysis.hpp"
#include "pap/dynamics.hpp"
#include "pap/model.hpp"
#include "pap/pulse.hpp"

// JSON configuration layer for the command-line tool. The config file is the
// source of truth; command-line flags override individual scalars before
// parsing, so the manifest always records the resolved values. Errors name
// the offending key path and map to exit code 2.

namespace pap::cli {

using Real = double;

struct ScanConfig {
  enum class Kind { grid, sigma };
  Kind kind = Kind::grid;
  RealVector<Real> alphas;  // grid: row axis
  RealVector<Real> scales;  // grid: column axis
  RealVector<Real> sigmas;  // sigma: axis
  Real alpha_omega = 0;     // sigma: fixed chirp
  Real scale = 0;           // sigma: fixed coupling scale
  int workers = 1;
};

struct SpectrogramConfig {
  Real sigma_probe = 0;
  Eigen::Index n_times = 141;
  Eigen::Index n_omegas = 141;
  // Explicit ranges; when absent, chosen from the train geometry.
  std::optional<Real> t_min, t_max, w_min, w_max;
};

struct BlochConfig {
  Eigen::Index pulses = 20;
};

struct Config {
  LevelSystem<Real> system;
  TargetSuperposition<Real> target;
  std::optional<ChirpParams<Real>> chirp;
  Real scale = 0;                        // drive.scale; 0 when absent
  std::optional<int> single_label;       // drive.single_label: one-window field
  std::optional<int> block_label;        // remove this level's window
  PropagationSpec<Real> prop;
  std::optional<ScanConfig> scan;
  std::optional<SpectrogramConfig> spectrogram;
  std::optional<BlochConfig> bloch;
  nlohmann::json raw;  // resolved tree, recorded in manifests
};

// Reads and parses a JSON file; errors carry the file name.
nlohmann::json load_json(const std::filesystem::path& file);

// Parses the resolved tree. base_dir anchors a relative "model_file".
Config parse_config(const nlohmann::json& j,
                    const std::filesystem::path& base_dir);

// Builds the pulse train a config describes (chirp section required).
PulseTrain<Real> train_from_config(const Config& cfg);

}  // namespace pap::cli
