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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pap/errors.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Level-structure model: one ground level coupled by one-photon transitions
// to a manifold of excited levels, a subset of which ("targets") defines the
// superposition the driving field is designed to populate. All energies are
// angular frequencies (rad/fs) relative to an arbitrary zero; transition
// dipoles are real non-negative (complex character lives in the mode phases).

namespace pap {

enum class LevelKind { target, spectator };

template <typename Scalar>
struct Level {
  int label = 0;        // spectroscopic index (e.g. vibrational quantum number)
  Scalar energy = 0;    // rad/fs
  Scalar dipole = 0;    // relative transition moment to the ground level
  LevelKind kind = LevelKind::spectator;
};

template <typename Scalar>
struct LevelSystem {
  Scalar ground_energy = 0;           // rad/fs
  Scalar carrier = 0;                 // laser carrier frequency, rad/fs
  std::vector<Level<Scalar>> levels;  // ascending energy

  Eigen::Index size() const { return Eigen::Index(levels.size()); }
};

// Normalized complex amplitudes over a subset of target-kind levels.
template <typename Scalar>
struct TargetSuperposition {
  std::vector<int> labels;
  ComplexVector<Scalar> c;
};

// Throws ConfigError naming the offending field when an invariant is broken:
// duplicate labels, non-monotone energies, or a negative dipole.
template <typename Scalar>
void validate(const LevelSystem<Scalar>& sys) {
  if (sys.levels.empty()) throw ConfigError("levels: empty excited manifold");
  if (!(sys.carrier > 0)) throw ConfigError("carrier: must be positive");
  for (std::size_t i = 0; i < sys.levels.size(); ++i) {
    const auto& lv = sys.levels[i];
    const std::string at = "levels[" + std::to_string(i) + "]";
    if (lv.dipole < 0) throw ConfigError(at + ".dipole: negative dipole");
    if (lv.energy <= sys.ground_energy)
      throw ConfigError(at + ".energy: not above the ground energy");
    if (i > 0 && !(lv.energy > sys.levels[i - 1].energy))
      throw ConfigError(at + ".energy: non-monotone energies");
    for (std::size_t j = 0; j < i; ++j)
      if (sys.levels[j].label == lv.label)
        throw ConfigError(at + ".label: duplicate label " +
                          std::to_string(lv.label));
  }
}

template <typename Scalar>
Eigen::Index level_index(const LevelSystem<Scalar>& sys, int label) {
  for (std::size_t i = 0; i < sys.levels.size(); ++i)
    if (sys.levels[i].label == label) return Eigen::Index(i);
  throw ConfigError("label " + std::to_string(label) + ": unknown level");
}

// Validates the superposition against the system: unit norm within 1e-12 and
// every referenced label of target kind.
template <typename Scalar>
void validate(const LevelSystem<Scalar>& sys,
              const TargetSuperposition<Scalar>& target) {
  if (target.labels.empty()) throw ConfigError("target.labels: empty");
  if (Eigen::Index(target.labels.size()) != target.c.size())
    throw ConfigError("target.c: length differs from target.labels");
  if (std::abs(target.c.squaredNorm() - Scalar(1)) > Scalar(1e-12))
    throw ConfigError("target.c: coefficients not normalized");
  for (std::size_t i = 0; i < target.labels.size(); ++i) {
    const Eigen::Index k = level_index(sys, target.labels[i]);
    if (sys.levels[k].kind != LevelKind::target)
      throw ConfigError("target.labels[" + std::to_string(i) +
                        "]: level is not target-kind");
    for (std::size_t j = 0; j < i; ++j)
      if (target.labels[j] == target.labels[i])
        throw ConfigError("target.labels[" + std::to_string(i) +
                          "]: duplicate label");
  }
}

// Resonance frequency of the transition into the given excited level.
template <typename Scalar>
Scalar resonance(const LevelSystem<Scalar>& sys, Eigen::Index i) {
  return sys.levels[i].energy - sys.ground_energy;
}

template <typename Scalar>
std::vector<Eigen::Index> target_indices(
    const LevelSystem<Scalar>& sys, const TargetSuperposition<Scalar>& t) {
  std::vector<Eigen::Index> idx;
  idx.reserve(t.labels.size());
  for (int label : t.labels) idx.push_back(level_index(sys, label));
  return idx;
}

// Adjacent spacings of the target resonances, in label order of `t`.
template <typename Scalar>
RealVector<Scalar> target_spacings(const LevelSystem<Scalar>& sys,
                                   const TargetSuperposition<Scalar>& t) {
  const auto idx = target_indices(sys, t);
  RealVector<Scalar> d(Eigen::Index(idx.size()) - 1);
  for (Eigen::Index i = 0; i + 1 < Eigen::Index(idx.size()); ++i)
    d[i] = resonance(sys, idx[i + 1]) - resonance(sys, idx[i]);
  return d;
}

// Half the minimum adjacent target spacing: the spectral-selectivity scale
// against which the per-window width sigma_omega is judged.
template <typename Scalar>
Scalar half_min_spacing(const LevelSystem<Scalar>& sys,
                        const TargetSuperposition<Scalar>& t) {
  const auto d = target_spacings(sys, t);
  if (d.size() == 0)
    throw ConfigError("target: half-spacing undefined for a single level");
  return d.minCoeff() / Scalar(2);
}

// Beat period of the target manifold, 2*pi / (mean adjacent spacing): the
// sub-pulse spacing of the shaped field.
template <typename Scalar>
Scalar beat_period(const LevelSystem<Scalar>& sys,
                   const TargetSuperposition<Scalar>& t) {
  const auto d = target_spacings(sys, t);
  if (d.size() == 0)
    throw ConfigError("target: beat period undefined for a single level");
  return Scalar(kTwoPi) / d.mean();
}

}  // namespace pap
