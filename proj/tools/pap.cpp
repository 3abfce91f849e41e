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

// Command-line front end. Subcommands share one JSON config format; flags
// override individual config scalars. Outputs land under $PAP_OUTPUT_ROOT
// (default ./out), one directory per run, with a manifest.json.

#include <functional>
#include <string>

#include <CLI11.hpp>

#include "pap/commands.hpp"

namespace {

// Registers the options shared by every subcommand.
void add_common(CLI::App* cmd, pap::cli::Flags& f) {
  cmd->add_option("config", f.config_file, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out_name,
                  "output directory name under the output root");
}

void add_field_overrides(CLI::App* cmd, pap::cli::Flags& f) {
  cmd->add_option("--scale", f.scale, "coupling scale s (rad/fs)");
  cmd->add_option("--alpha-omega", f.alpha_omega,
                  "spectral chirp rate (fs^2)");
  cmd->add_option("--sigma-omega", f.sigma_omega,
                  "spectral window width (rad/fs)");
  cmd->add_option("--t0", f.t0, "train center (fs)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Selective population transfer into a level superposition by "
      "piecewise adiabatic passage"};
  app.require_subcommand(1);

  pap::cli::Flags f;
  std::function<int()> run;

  auto* validate =
      app.add_subcommand("validate", "check a config and print a summary");
  add_common(validate, f);
  add_field_overrides(validate, f);
  validate->callback([&] { run = [&] { return pap::cli::cmd_validate(f); }; });

  auto* shape = app.add_subcommand(
      "shape", "synthesize the shaped field and its sub-pulse features");
  add_common(shape, f);
  add_field_overrides(shape, f);
  shape->add_option("--block", f.block,
                    "suppress the spectral window of this level label");
  shape->callback([&] { run = [&] { return pap::cli::cmd_shape(f); }; });

  auto* propagate = app.add_subcommand(
      "propagate", "integrate the driven level system and report transfer");
  add_common(propagate, f);
  add_field_overrides(propagate, f);
  propagate->add_option("--frame", f.frame,
                        "propagation frame: rotating, modal, or bare");
  propagate->add_option("--block", f.block,
                        "suppress the spectral window of this level label");
  propagate->add_flag(
      "--fixed-step",
      [&](std::int64_t count) { f.fixed_step = count > 0; },
      "use the fixed-step integrator (byte-reproducible output)");
  propagate->callback(
      [&] { run = [&] { return pap::cli::cmd_propagate(f); }; });

  auto* spectrogram = app.add_subcommand(
      "spectrogram", "time-frequency portrait of the shaped field");
  add_common(spectrogram, f);
  add_field_overrides(spectrogram, f);
  spectrogram->add_option("--sigma-probe", f.sigma_probe,
                          "probe duration (fs)");
  spectrogram->callback(
      [&] { run = [&] { return pap::cli::cmd_spectrogram(f); }; });

  auto* scan = app.add_subcommand(
      "scan", "map transfer over chirp/amplitude or window width");
  add_common(scan, f);
  add_field_overrides(scan, f);
  scan->add_option("--workers", f.workers, "worker threads for scan cells");
  scan->callback([&] { run = [&] { return pap::cli::cmd_scan(f); }; });

  auto* bloch = app.add_subcommand(
      "bloch", "piecewise two-level rotation model of the train");
  add_common(bloch, f);
  add_field_overrides(bloch, f);
  bloch->add_option("--pulses", f.pulses, "number of sub-pulse slices");
  bloch->callback([&] { run = [&] { return pap::cli::cmd_bloch(f); }; });

  CLI11_PARSE(app, argc, argv);
  return run ? run() : 1;
}
