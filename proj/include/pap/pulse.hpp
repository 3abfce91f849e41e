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

#include <cmath>
#include <complex>
#include <vector>

#include "pap/errors.hpp"
#include "pap/model.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Multi-mode chirped pulse train. The field is specified in the spectral
// domain as a comb of Gaussian windows, one per addressed transition, all
// sharing one width sigma_omega and one quadratic spectral phase alpha_omega
// centered on each window:
//
//   amp(w) = sum_n eps_n exp[-(w-w_n)^2/(2 sw^2)] exp[i aw (w-w_n)^2/2]
//            exp[i (w t0 - phi_n)]
//
// The matching time-domain form, with a = aw*sw^2,
//
//   field(t) = Re{ f(tau) exp[i(w0 tau + at tau^2/2 - phi_c)] g1(tau) },
//   f(tau)   = peak * exp(-tau^2/(2 st^2)),          tau = t - t0,
//   g1(tau)  = 2 sum_n eps_n exp[i((w_n - w0) tau + phi_n)],
//
// is exact under the transform pair  field+(t) = Integral dw amp(w) e^{-iwt},
// field = 2 Re field+. The window parameters map as
//
//   st^2 = (1+a^2)/sw^2,  at = aw sw^4/(1+a^2),
//   phi_c = atan(a)/2,    peak = sw sqrt(2 pi)/(1+a^2)^(1/4).
//
// Physically: the train is a sequence of sub-pulses spaced by the beat period
// of the addressed manifold, each sub-pulse frequency-stepped by the temporal
// chirp, driving one piecewise adiabatic passage per sub-pulse.

namespace pap {

template <typename Scalar>
struct ChirpParams {
  Scalar sigma_omega = 0;          // spectral window width, rad/fs
  Scalar alpha_omega = 0;          // spectral chirp rate, fs^2
  Scalar t0 = 0;                   // arrival time of the train center, fs
  Scalar suppression_floor = 1e-6; // relative magnitude below which sampled
                                   // spectral coefficients are zeroed
};

// Derived time-domain window parameters; see the map above.
template <typename Scalar>
struct TimeParams {
  Scalar sigma_t = 0;  // fs
  Scalar alpha_t = 0;  // temporal chirp rate, rad/fs^2
  Scalar phi_c = 0;    // constant carrier phase offset, rad
  Scalar peak = 0;     // envelope maximum for a unit spectral amplitude
};

template <typename Scalar>
void validate(const ChirpParams<Scalar>& cp) {
  if (!(cp.sigma_omega > 0))
    throw ConfigError("chirp.sigma_omega: must be positive");
  if (!(cp.suppression_floor >= 0) || cp.suppression_floor >= Scalar(1e-3))
    throw ConfigError("chirp.suppression_floor: must lie in [0, 1e-3)");
}

template <typename Scalar>
TimeParams<Scalar> time_params(const ChirpParams<Scalar>& cp) {
  validate(cp);
  const Scalar a = cp.alpha_omega * cp.sigma_omega * cp.sigma_omega;
  const Scalar b = 1 + a * a;
  TimeParams<Scalar> tp;
  tp.sigma_t = std::sqrt(b) / cp.sigma_omega;
  tp.alpha_t = cp.alpha_omega * std::pow(cp.sigma_omega, Scalar(4)) / b;
  tp.phi_c = std::atan(a) / 2;
  tp.peak = cp.sigma_omega * std::sqrt(Scalar(kTwoPi)) / std::pow(b, Scalar(0.25));
  return tp;
}

// One spectral window, tied to the excited level it addresses.
template <typename Scalar>
struct Mode {
  Eigen::Index level = 0;  // index into LevelSystem::levels
  Scalar omega_res = 0;    // window center = transition frequency, rad/fs
  Scalar amplitude = 0;    // spectral amplitude eps_n >= 0
  Scalar phase = 0;        // spectral phase phi_n, rad
  Scalar dipole = 0;       // transition moment of the addressed level
};

template <typename Scalar>
struct ModeSet {
  std::vector<Mode<Scalar>> modes;  // ascending omega_res
  Scalar scale = 0;   // overall coupling scale: sqrt(sum (mu eps)^2)
  Scalar omega0 = 0;  // reference carrier for envelope factorization, rad/fs
};

// Builds the spectral comb that steers the ground population into `target`:
// amplitudes eps_n = scale*|c_n|/mu_n compensate the transition moments,
// phases phi_n = -arg(c_n) + gamma imprint the superposition phases. The
// free global phase gamma is pinned so the largest-|c_n| mode (ties: lowest
// index) carries phi = arg(c_n). In the rotating frame the resulting coupling
// into level n is scale*c_n*f(tau) up to one global phase.
template <typename Scalar>
ModeSet<Scalar> derive_modes(const LevelSystem<Scalar>& sys,
                             const TargetSuperposition<Scalar>& target,
                             Scalar scale) {
  validate(sys, target);
  if (!(scale > 0)) throw ConfigError("scale: must be positive");
  const auto idx = target_indices(sys, target);
  std::size_t pin = 0;
  for (std::size_t n = 1; n < idx.size(); ++n)
    if (std::abs(target.c[Eigen::Index(n)]) >
        std::abs(target.c[Eigen::Index(pin)]))
      pin = n;
  const Scalar gamma = 2 * std::arg(target.c[Eigen::Index(pin)]);

  ModeSet<Scalar> set;
  set.scale = scale;
  set.omega0 = sys.carrier;
  set.modes.reserve(idx.size());
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const std::complex<Scalar> c = target.c[Eigen::Index(n)];
    Mode<Scalar> m;
    m.level = idx[n];
    m.omega_res = resonance(sys, idx[n]);
    m.dipole = sys.levels[std::size_t(idx[n])].dipole;
    if (std::abs(c) > 0 && !(m.dipole > 0))
      throw ConfigError("levels[" + std::to_string(idx[n]) +
                        "].dipole: zero dipole on a populated target");
    m.amplitude = m.dipole > 0 ? scale * std::abs(c) / m.dipole : Scalar(0);
    m.phase = -std::arg(c) + gamma;
    set.modes.push_back(m);
  }
  return set;
}

// Inverse of derive_modes up to one global phase on the coefficients.
template <typename Scalar>
TargetSuperposition<Scalar> recover_target(const LevelSystem<Scalar>& sys,
                                           const ModeSet<Scalar>& set) {
  TargetSuperposition<Scalar> t;
  t.c.resize(Eigen::Index(set.modes.size()));
  for (std::size_t n = 0; n < set.modes.size(); ++n) {
    const auto& m = set.modes[n];
    t.labels.push_back(sys.levels[std::size_t(m.level)].label);
    t.c[Eigen::Index(n)] = m.dipole * m.amplitude *
                           std::exp(std::complex<Scalar>(0, -m.phase));
  }
  const Scalar norm = t.c.norm();
  if (!(norm > 0)) throw ConfigError("modes: all amplitudes vanish");
  t.c /= norm;
  return t;
}

template <typename Scalar>
struct PulseTrain {
  ModeSet<Scalar> modes;
  ChirpParams<Scalar> chirp;
  TimeParams<Scalar> time;
};

template <typename Scalar>
PulseTrain<Scalar> pulse_train(const ModeSet<Scalar>& modes,
                               const ChirpParams<Scalar>& chirp) {
  if (modes.modes.empty()) throw ConfigError("modes: empty mode set");
  return PulseTrain<Scalar>{modes, chirp, time_params(chirp)};
}

// Single window centered on one transition; carrier pinned to it.
template <typename Scalar>
PulseTrain<Scalar> single_chirp_pulse(Scalar omega_res, Scalar dipole,
                                      const ChirpParams<Scalar>& chirp,
                                      Scalar scale) {
  if (!(dipole > 0)) throw ConfigError("dipole: must be positive");
  if (!(scale > 0)) throw ConfigError("scale: must be positive");
  ModeSet<Scalar> set;
  set.scale = scale;
  set.omega0 = omega_res;
  set.modes.push_back(
      Mode<Scalar>{0, omega_res, scale / dipole, Scalar(0), dipole});
  return pulse_train(set, chirp);
}

// Removes one spectral window (by addressed level index). In the resolved
// regime this is the analytic model of blocking that window in the shaper.
template <typename Scalar>
PulseTrain<Scalar> block_mode(const PulseTrain<Scalar>& train,
                              Eigen::Index level) {
  PulseTrain<Scalar> out = train;
  bool found = false;
  for (auto& m : out.modes.modes)
    if (m.level == level) {
      m.amplitude = 0;
      found = true;
    }
  if (!found) throw ConfigError("block: no mode addresses level index " +
                                std::to_string(level));
  Scalar s2 = 0;
  for (const auto& m : out.modes.modes)
    s2 += (m.dipole * m.amplitude) * (m.dipole * m.amplitude);
  out.modes.scale = std::sqrt(s2);
  return out;
}

// True when adjacent windows are closer than 2 sigma_omega, i.e. the comb is
// no longer spectrally resolved and window-local reasoning degrades.
template <typename Scalar>
bool windows_overlap(const PulseTrain<Scalar>& train) {
  const auto& ms = train.modes.modes;
  for (std::size_t n = 0; n + 1 < ms.size(); ++n)
    if (ms[n + 1].omega_res - ms[n].omega_res <
        2 * train.chirp.sigma_omega)
      return true;
  return false;
}

// Common Gaussian envelope f(tau), including the peak factor, so that the
// rotating-frame coupling into level n is scale*c_n*envelope_gaussian(t).
template <typename Scalar>
Scalar envelope_gaussian(const PulseTrain<Scalar>& train, Scalar t) {
  const Scalar tau = t - train.chirp.t0;
  const Scalar st = train.time.sigma_t;
  return train.time.peak * std::exp(-tau * tau / (2 * st * st));
}

// Beat factor g1(tau): the mode comb referenced to the carrier omega0.
template <typename Scalar>
std::complex<Scalar> g1(const PulseTrain<Scalar>& train, Scalar t) {
  const Scalar tau = t - train.chirp.t0;
  std::complex<Scalar> acc(0, 0);
  for (const auto& m : train.modes.modes)
    acc += m.amplitude *
           std::exp(std::complex<Scalar>(
               0, (m.omega_res - train.modes.omega0) * tau + m.phase));
  return Scalar(2) * acc;
}

// Complex envelope A(t) with respect to the carrier omega0:
// field(t) = Re{A(t) exp[i omega0 (t-t0)]}.
template <typename Scalar>
std::complex<Scalar> complex_envelope(const PulseTrain<Scalar>& train,
                                      Scalar t) {
  const Scalar tau = t - train.chirp.t0;
  const Scalar chirp_phase =
      train.time.alpha_t * tau * tau / 2 - train.time.phi_c;
  return envelope_gaussian(train, t) *
         std::exp(std::complex<Scalar>(0, chirp_phase)) * g1(train, t);
}

// Real laser field. The optional carrier argument substitutes a different
// oscillation frequency under the same envelope (the window comb follows the
// carrier rigidly); used to scale the carrier down for propagation without
// the rotating-wave approximation while keeping all detunings intact.
template <typename Scalar>
Scalar real_field(const PulseTrain<Scalar>& train, Scalar t, Scalar carrier) {
  const Scalar tau = t - train.chirp.t0;
  return (complex_envelope(train, t) *
          std::exp(std::complex<Scalar>(0, carrier * tau)))
      .real();
}

template <typename Scalar>
Scalar real_field(const PulseTrain<Scalar>& train, Scalar t) {
  return real_field(train, t, train.modes.omega0);
}

// Spectral amplitude of the analytic comb at angular frequency w.
template <typename Scalar>
std::complex<Scalar> spectral_amplitude(const PulseTrain<Scalar>& train,
                                        Scalar w) {
  const auto& cp = train.chirp;
  std::complex<Scalar> acc(0, 0);
  for (const auto& m : train.modes.modes) {
    const Scalar d = w - m.omega_res;
    const Scalar mag =
        m.amplitude *
        std::exp(-d * d / (2 * cp.sigma_omega * cp.sigma_omega));
    acc += mag * std::exp(std::complex<Scalar>(
                     0, cp.alpha_omega * d * d / 2 + w * cp.t0 - m.phase));
  }
  return acc;
}

// Effective rotation angle 2*Integral Omega_eff dt of the whole train, where
// Omega_eff(t) = scale*f(tau) is the root-sum-square coupling. Equals pi for
// a resonant pulse that exactly inverts a two-level transition.
template <typename Scalar>
Scalar pulse_area(const PulseTrain<Scalar>& train) {
  return 2 * train.modes.scale * train.time.peak *
         std::sqrt(Scalar(kTwoPi)) * train.time.sigma_t;
}

}  // namespace pap
