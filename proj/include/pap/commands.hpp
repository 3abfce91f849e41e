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

#include <optional>
#include <string>

// Command bodies behind the CLI. Each loads a config, applies flag
// overrides, runs, writes outputs plus a manifest under the output root, and
// returns the process exit code: 0 success, 2 configuration error, 3
// numerical failure.

namespace pap::cli {

struct Flags {
  std::string config_file;
  std::string out_name;  // output directory name under the root; "" = default
  std::optional<double> scale;
  std::optional<double> alpha_omega;
  std::optional<double> sigma_omega;
  std::optional<double> t0;
  std::optional<std::string> frame;
  std::optional<bool> fixed_step;
  std::optional<int> block;  // remove this level's spectral window
  std::optional<int> workers;
  std::optional<int> pulses;
  std::optional<double> sigma_probe;
};

int cmd_validate(const Flags& f);
int cmd_shape(const Flags& f);
int cmd_propagate(const Flags& f);
int cmd_spectrogram(const Flags& f);
int cmd_scan(const Flags& f);
int cmd_bloch(const Flags& f);

}  // namespace pap::cli
