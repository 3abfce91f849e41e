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

#include "pap/config.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <initializer_list>
#include <thread>

#include "pap/errors.hpp"
#include "pap/units.hpp"

namespace pap::cli {

namespace {

using nlohmann::json;

// Misspelled keys fail loudly instead of silently falling back to defaults.
void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) return;
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      throw ConfigError(path + item.key() + ": unknown key");
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(path + key + ": missing");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError(path + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key,
                 const std::string& path, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, path);
}

std::int64_t integer(const json& j, const std::string& key,
                     const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer())
    throw ConfigError(path + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& j, const std::string& key,
                 const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw ConfigError(path + key + ": expected a string");
  return v.get<std::string>();
}

RealVector<Real> number_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty())
    throw ConfigError(path + ": expected a non-empty array of numbers");
  RealVector<Real> out(Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(path + "[" + std::to_string(i) +
                        "]: expected a number");
    out[Eigen::Index(i)] = v[i].get<double>();
  }
  return out;
}

// Axis spec: either an explicit array or {"min":..,"max":..,"count":..}.
RealVector<Real> axis(const json& v, const std::string& path) {
  if (v.is_array()) return number_list(v, path);
  if (v.is_object()) {
    reject_unknown(v, path + ".", {"min", "max", "count"});
    const double lo = number(v, "min", path + ".");
    const double hi = number(v, "max", path + ".");
    const std::int64_t n = integer(v, "count", path + ".");
    if (n < 1) throw ConfigError(path + ".count: must be >= 1");
    if (n == 1) {
      RealVector<Real> one(1);
      one[0] = lo;
      return one;
    }
    return RealVector<Real>::LinSpaced(Eigen::Index(n), lo, hi);
  }
  throw ConfigError(path + ": expected an array or {min,max,count}");
}

LevelSystem<Real> parse_model(const json& m, const std::string& path) {
  reject_unknown(m, path,
                 {"ground_energy", "carrier", "carrier_wavelength_nm",
                  "levels", "target"});
  LevelSystem<Real> sys;
  sys.ground_energy = number(m, "ground_energy", path);
  if (m.contains("carrier")) {
    sys.carrier = number(m, "carrier", path);
  } else {
    sys.carrier = carrier_from_wavelength<Real>(
        number(m, "carrier_wavelength_nm", path));
  }
  const json& levels = require(m, "levels", path);
  if (!levels.is_array() || levels.empty())
    throw ConfigError(path + "levels: expected a non-empty array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string at = path + "levels[" + std::to_string(i) + "].";
    reject_unknown(levels[i], at, {"label", "energy", "dipole", "kind"});
    Level<Real> lv;
    lv.label = int(integer(levels[i], "label", at));
    lv.energy = number(levels[i], "energy", at);
    lv.dipole = number(levels[i], "dipole", at);
    const std::string kind = text(levels[i], "kind", at);
    if (kind == "target") {
      lv.kind = LevelKind::target;
    } else if (kind == "spectator") {
      lv.kind = LevelKind::spectator;
    } else {
      throw ConfigError(at + "kind: expected \"target\" or \"spectator\"");
    }
    sys.levels.push_back(lv);
  }
  validate(sys);
  return sys;
}

TargetSuperposition<Real> parse_target(const json& t,
                                       const LevelSystem<Real>& sys,
                                       const std::string& path) {
  reject_unknown(t, path, {"labels", "magnitudes", "phases"});
  TargetSuperposition<Real> target;
  const json& labels = require(t, "labels", path);
  if (!labels.is_array() || labels.empty())
    throw ConfigError(path + "labels: expected a non-empty array");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_number_integer())
      throw ConfigError(path + "labels[" + std::to_string(i) +
                        "]: expected an integer");
    target.labels.push_back(labels[i].get<int>());
  }
  const RealVector<Real> mag =
      number_list(require(t, "magnitudes", path), path + "magnitudes");
  const RealVector<Real> phase =
      number_list(require(t, "phases", path), path + "phases");
  if (mag.size() != Eigen::Index(target.labels.size()) ||
      phase.size() != mag.size())
    throw ConfigError(path +
                      "magnitudes/phases: lengths must match labels");
  target.c.resize(mag.size());
  for (Eigen::Index i = 0; i < mag.size(); ++i) {
    if (mag[i] < 0)
      throw ConfigError(path + "magnitudes[" + std::to_string(i) +
                        "]: negative magnitude");
    target.c[i] = std::polar(mag[i], phase[i]);
  }
  const Real norm = target.c.norm();
  if (!(norm > 0)) throw ConfigError(path + "magnitudes: all zero");
  target.c /= norm;
  validate(sys, target);
  return target;
}

}  // namespace

json load_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return j;
}

Config parse_config(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j, "",
                 {"model", "model_file", "pulse", "drive", "block_label",
                  "propagation", "scan", "spectrogram", "bloch"});
  Config cfg;
  cfg.raw = j;

  json model_tree;
  if (j.contains("model")) {
    model_tree = j.at("model");
  } else if (j.contains("model_file")) {
    const std::string name = text(j, "model_file", "");
    std::filesystem::path p = name;
    if (p.is_relative()) p = base_dir / p;
    model_tree = load_json(p);
    cfg.raw["model"] = model_tree;  // manifest records the resolved model
  } else {
    throw ConfigError("model: missing (provide model or model_file)");
  }
  cfg.system = parse_model(model_tree, "model.");
  cfg.target =
      parse_target(require(model_tree, "target", "model."), cfg.system,
                   "model.target.");

  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    reject_unknown(p, "pulse.",
                   {"sigma_omega", "alpha_omega", "t0", "suppression_floor"});
    ChirpParams<Real> cp;
    cp.sigma_omega = number(p, "sigma_omega", "pulse.");
    cp.alpha_omega = number_or(p, "alpha_omega", "pulse.", 0.0);
    cp.t0 = number_or(p, "t0", "pulse.", 0.0);
    cp.suppression_floor =
        number_or(p, "suppression_floor", "pulse.", 1e-6);
    validate(cp);
    cfg.chirp = cp;
  }

  if (j.contains("drive")) {
    const json& d = j.at("drive");
    reject_unknown(d, "drive.", {"scale", "single_label"});
    cfg.scale = number_or(d, "scale", "drive.", 0.0);
    if (d.contains("single_label"))
      cfg.single_label = int(integer(d, "single_label", "drive."));
  }
  if (j.contains("block_label"))
    cfg.block_label = int(integer(j, "block_label", ""));

  if (j.contains("propagation")) {
    const json& p = j.at("propagation");
    reject_unknown(p, "propagation.",
                   {"frame", "span_sigmas", "samples", "rtol", "atol",
                    "max_step", "fixed_step", "fixed_steps_per_sample",
                    "carrier_divisor"});
    const std::string frame =
        p.contains("frame") ? text(p, "frame", "propagation.") : "rotating";
    if (frame == "rotating") {
      cfg.prop.frame = Frame::rotating;
    } else if (frame == "modal") {
      cfg.prop.frame = Frame::modal;
    } else if (frame == "bare") {
      cfg.prop.frame = Frame::bare;
    } else {
      throw ConfigError(
          "propagation.frame: expected rotating, modal, or bare");
    }
    cfg.prop.span_sigmas =
        number_or(p, "span_sigmas", "propagation.", cfg.prop.span_sigmas);
    if (p.contains("samples"))
      cfg.prop.samples = Eigen::Index(integer(p, "samples", "propagation."));
    cfg.prop.ode.rtol = number_or(p, "rtol", "propagation.", cfg.prop.ode.rtol);
    cfg.prop.ode.atol = number_or(p, "atol", "propagation.", cfg.prop.ode.atol);
    cfg.prop.ode.max_step =
        number_or(p, "max_step", "propagation.", cfg.prop.ode.max_step);
    if (p.contains("fixed_step")) {
      const json& v = p.at("fixed_step");
      if (!v.is_boolean())
        throw ConfigError("propagation.fixed_step: expected a boolean");
      cfg.prop.fixed_step = v.get<bool>();
    }
    if (p.contains("fixed_steps_per_sample"))
      cfg.prop.fixed_steps_per_sample =
          Eigen::Index(integer(p, "fixed_steps_per_sample", "propagation."));
    cfg.prop.carrier_divisor = number_or(p, "carrier_divisor", "propagation.",
                                         cfg.prop.carrier_divisor);
  }

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    reject_unknown(s, "scan.",
                   {"kind", "alphas", "scales", "sigmas", "alpha_omega",
                    "scale", "workers"});
    ScanConfig sc;
    const std::string kind =
        s.contains("kind") ? text(s, "kind", "scan.") : "grid";
    if (kind == "grid") {
      sc.kind = ScanConfig::Kind::grid;
      sc.alphas = axis(require(s, "alphas", "scan."), "scan.alphas");
      sc.scales = axis(require(s, "scales", "scan."), "scan.scales");
    } else if (kind == "sigma") {
      sc.kind = ScanConfig::Kind::sigma;
      sc.sigmas = axis(require(s, "sigmas", "scan."), "scan.sigmas");
      sc.alpha_omega = number(s, "alpha_omega", "scan.");
      sc.scale = number(s, "scale", "scan.");
    } else {
      throw ConfigError("scan.kind: expected grid or sigma");
    }
    // Default: available parallelism. Results are worker-count independent.
    sc.workers = int(
        s.contains("workers")
            ? integer(s, "workers", "scan.")
            : std::max(1u, std::thread::hardware_concurrency()));
    if (sc.workers < 1) throw ConfigError("scan.workers: must be >= 1");
    cfg.scan = sc;
  }

  if (j.contains("spectrogram")) {
    const json& s = j.at("spectrogram");
    reject_unknown(s, "spectrogram.",
                   {"sigma_probe", "n_times", "n_omegas", "t_min", "t_max",
                    "w_min", "w_max"});
    SpectrogramConfig sp;
    sp.sigma_probe = number(s, "sigma_probe", "spectrogram.");
    if (s.contains("n_times"))
      sp.n_times = Eigen::Index(integer(s, "n_times", "spectrogram."));
    if (s.contains("n_omegas"))
      sp.n_omegas = Eigen::Index(integer(s, "n_omegas", "spectrogram."));
    if (s.contains("t_min")) sp.t_min = number(s, "t_min", "spectrogram.");
    if (s.contains("t_max")) sp.t_max = number(s, "t_max", "spectrogram.");
    if (s.contains("w_min")) sp.w_min = number(s, "w_min", "spectrogram.");
    if (s.contains("w_max")) sp.w_max = number(s, "w_max", "spectrogram.");
    if (sp.n_times < 2 || sp.n_omegas < 3)
      throw ConfigError("spectrogram: grid too small");
    cfg.spectrogram = sp;
  }

  if (j.contains("bloch")) {
    reject_unknown(j.at("bloch"), "bloch.", {"pulses"});
    BlochConfig b;
    b.pulses = Eigen::Index(integer(j.at("bloch"), "pulses", "bloch."));
    if (b.pulses < 1) throw ConfigError("bloch.pulses: must be >= 1");
    cfg.bloch = b;
  }

  return cfg;
}

PulseTrain<Real> train_from_config(const Config& cfg) {
  if (!cfg.chirp) throw ConfigError("pulse: missing");
  PulseTrain<Real> train = [&] {
    if (cfg.single_label) {
      const Eigen::Index k = level_index(cfg.system, *cfg.single_label);
      if (!(cfg.scale > 0)) throw ConfigError("drive.scale: missing");
      return single_chirp_pulse(resonance(cfg.system, k),
                                cfg.system.levels[std::size_t(k)].dipole,
                                *cfg.chirp, cfg.scale);
    }
    if (!(cfg.scale > 0)) throw ConfigError("drive.scale: missing");
    return pulse_train(derive_modes(cfg.system, cfg.target, cfg.scale),
                       *cfg.chirp);
  }();
  if (cfg.block_label)
    train = block_mode(train, level_index(cfg.system, *cfg.block_label));
  return train;
}

}  // namespace pap::cli
