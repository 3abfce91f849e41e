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
#include "pap/ode.hpp"
#include "pap/pulse.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Propagation of the level amplitudes under the shaped field, in three frames
// of decreasing approximation:
//
//   rotating  - one rotating-wave window per addressed level, each level
//               referenced to its own instantaneous window frequency; the
//               textbook picture with a common sweeping detuning.
//   modal     - rotating-wave in the field oscillation but keeping the full
//               window comb: every level feels every window through the beat
//               factor, so cross-window driving and spectator leakage appear.
//   bare      - no rotating-wave approximation; the real field drives the
//               bare levels. The optical carrier is divided down (window
//               spacings and detunings kept intact) so the integration stays
//               affordable while counter-rotating terms remain present.
//
// State layout: index 0 is the ground level, 1..N the excited levels in
// LevelSystem order. All propagators evolve i dy/dt = H(t) y.

namespace pap {

enum class Frame { rotating, modal, bare };

template <typename Scalar>
struct PropagationSpec {
  Frame frame = Frame::rotating;
  Scalar span_sigmas = Scalar(4.2);  // integrate over t0 +- span*sigma_t
  Eigen::Index samples = 401;        // stored samples, endpoints included
  OdeOptions<Scalar> ode;
  bool fixed_step = false;  // classical fixed-grid fourth-order integration,
                            // bitwise reproducible across runs
  Eigen::Index fixed_steps_per_sample = 64;
  Scalar carrier_divisor = Scalar(5);  // bare frame carrier reduction
};

template <typename Scalar>
struct Trajectory {
  Frame frame = Frame::rotating;
  Scalar carrier = 0;  // oscillation frequency the frame references, rad/fs
  RealVector<Scalar> times;
  ComplexMatrix<Scalar> states;  // (1+N) x n_times, one column per time
  OdeStats stats;
  bool failed = false;  // integrator gave up; earlier columns are retained
};

template <typename Scalar>
RealVector<Scalar> sample_times(const PulseTrain<Scalar>& train,
                                const PropagationSpec<Scalar>& spec) {
  if (spec.samples < 2) throw ConfigError("samples: need at least 2");
  const Scalar half = spec.span_sigmas * train.time.sigma_t;
  return RealVector<Scalar>::LinSpaced(spec.samples, train.chirp.t0 - half,
                                       train.chirp.t0 + half);
}

// result[k] = index of the mode driving excited level k, or -1. Each mode
// claims the level whose transition it detunes least from at t0.
template <typename Scalar>
std::vector<Eigen::Index> assign_modes(const LevelSystem<Scalar>& sys,
                                       const ModeSet<Scalar>& modes) {
  std::vector<Eigen::Index> owner(std::size_t(sys.size()), Eigen::Index(-1));
  for (std::size_t m = 0; m < modes.modes.size(); ++m) {
    Eigen::Index best = 0;
    Scalar best_gap = std::abs(resonance(sys, 0) - modes.modes[m].omega_res);
    for (Eigen::Index k = 1; k < sys.size(); ++k) {
      const Scalar gap =
          std::abs(resonance(sys, k) - modes.modes[m].omega_res);
      if (gap < best_gap) {
        best = k;
        best_gap = gap;
      }
    }
    if (owner[std::size_t(best)] >= 0)
      throw ConfigError("modes: two windows claim one level");
    owner[std::size_t(best)] = Eigen::Index(m);
  }
  return owner;
}

namespace detail {

// Rotating-frame right-hand side. Level k sits at detuning
// delta_k(t) = (E_k - E_0) - w_k(t) with w_k(t) = w_k^res + alpha_t tau the
// instantaneous frequency of its window; unaddressed levels ride the same
// sweep at zero coupling.
template <typename Scalar>
struct RotatingRhs {
  ComplexVector<Scalar> coupling;  // mu_k eps_m e^{-i phi_m}, 0 if unowned
  RealVector<Scalar> offset;       // (E_k - E_0) - w_m^res, 0 if unowned
  Scalar alpha_t, t0, sigma_t, peak;

  Scalar envelope(Scalar t) const {
    const Scalar tau = t - t0;
    return peak * std::exp(-tau * tau / (2 * sigma_t * sigma_t));
  }

  void operator()(Scalar t, const ComplexVector<Scalar>& y,
                  ComplexVector<Scalar>& dydt) const {
    const Scalar tau = t - t0;
    const Scalar f = envelope(t);
    const std::complex<Scalar> mi(0, -1);
    std::complex<Scalar> acc(0, 0);
    const Eigen::Index n = coupling.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::complex<Scalar> om = coupling[k] * f;
      const Scalar delta = offset[k] - alpha_t * tau;
      dydt[k + 1] = mi * (delta * y[k + 1] + om * y[0]);
      acc += std::conj(om) * y[k + 1];
    }
    dydt[0] = mi * acc;
  }
};

// Full-comb rotating-wave right-hand side: every level k couples to the
// whole window comb through g_k(t) = f(tau) mu_k e^{i wtil_k tau} S(tau),
// S(tau) = sum_l eps_l e^{-i phi_l} e^{-i wtil_l tau}, wtil relative to the
// carrier; all levels share the common sweep -alpha_t tau on the diagonal.
template <typename Scalar>
struct ModalRhs {
  RealVector<Scalar> wtil_level;       // (E_k - E_0) - omega0
  RealVector<Scalar> dipole;           // mu_k
  ComplexVector<Scalar> mode_amp;      // eps_l e^{-i phi_l}
  RealVector<Scalar> wtil_mode;        // w_l^res - omega0
  Scalar alpha_t, t0, sigma_t, peak;

  void operator()(Scalar t, const ComplexVector<Scalar>& y,
                  ComplexVector<Scalar>& dydt) const {
    const Scalar tau = t - t0;
    const Scalar f = peak * std::exp(-tau * tau / (2 * sigma_t * sigma_t));
    std::complex<Scalar> comb(0, 0);
    for (Eigen::Index l = 0; l < mode_amp.size(); ++l)
      comb += mode_amp[l] *
              std::exp(std::complex<Scalar>(0, -wtil_mode[l] * tau));
    const std::complex<Scalar> mi(0, -1);
    std::complex<Scalar> acc(0, 0);
    const Eigen::Index n = wtil_level.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::complex<Scalar> g =
          f * dipole[k] *
          std::exp(std::complex<Scalar>(0, wtil_level[k] * tau)) * comb;
      dydt[k + 1] = mi * (-alpha_t * tau * y[k + 1] + g * y[0]);
      acc += std::conj(g) * y[k + 1];
    }
    dydt[0] = mi * acc;
  }
};

// Bare-levels right-hand side: real field, real couplings, no rotating-wave
// step. Level energies are shifted so transition frequencies follow the
// divided carrier while window offsets from it are preserved.
template <typename Scalar>
struct BareRhs {
  RealVector<Scalar> energy;  // shifted transition frequencies
  RealVector<Scalar> dipole;
  PulseTrain<Scalar> train;
  Scalar carrier;

  void operator()(Scalar t, const ComplexVector<Scalar>& y,
                  ComplexVector<Scalar>& dydt) const {
    const Scalar e = real_field(train, t, carrier);
    const std::complex<Scalar> mi(0, -1);
    std::complex<Scalar> acc(0, 0);
    const Eigen::Index n = energy.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      const Scalar v = dipole[k] * e;
      dydt[k + 1] = mi * (energy[k] * y[k + 1] + v * y[0]);
      acc += v * y[k + 1];
    }
    dydt[0] = mi * acc;
  }
};

template <typename Scalar, typename Rhs>
Trajectory<Scalar> run_propagation(Rhs&& rhs, Frame frame, Scalar carrier,
                                   const RealVector<Scalar>& times,
                                   Eigen::Index dim,
                                   const PropagationSpec<Scalar>& spec) {
  Trajectory<Scalar> tr;
  tr.frame = frame;
  tr.carrier = carrier;
  tr.times = times;
  tr.states.resize(dim, times.size());
  ComplexVector<Scalar> y = ComplexVector<Scalar>::Zero(dim);
  y[0] = std::complex<Scalar>(1, 0);
  tr.states.col(0) = y;
  Eigen::Index stored = 1;
  try {
    for (Eigen::Index i = 1; i < times.size(); ++i) {
      if (spec.fixed_step) {
        integrate_fixed(rhs, times[i - 1], times[i],
                        spec.fixed_steps_per_sample, y);
        tr.stats.accepted += spec.fixed_steps_per_sample;
        tr.stats.evals += 4 * spec.fixed_steps_per_sample;
      } else {
        const OdeStats s =
            integrate_adaptive(rhs, times[i - 1], times[i], y, spec.ode);
        tr.stats.accepted += s.accepted;
        tr.stats.rejected += s.rejected;
        tr.stats.evals += s.evals;
      }
      tr.states.col(i) = y;
      ++stored;
    }
  } catch (const NumericsError&) {
    tr.failed = true;
    tr.times.conservativeResize(stored);
    tr.states.conservativeResize(Eigen::NoChange, stored);
  }
  return tr;
}

}  // namespace detail

// Rotating-frame Hamiltonian at time t; diagnostic form of RotatingRhs.
template <typename Scalar>
ComplexMatrix<Scalar> rwa_hamiltonian(const LevelSystem<Scalar>& sys,
                                      const PulseTrain<Scalar>& train,
                                      Scalar t) {
  const auto owner = assign_modes(sys, train.modes);
  const Eigen::Index n = sys.size();
  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(n + 1, n + 1);
  const Scalar tau = t - train.chirp.t0;
  const Scalar f = envelope_gaussian(train, t);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar offset = 0;
    std::complex<Scalar> om(0, 0);
    if (owner[std::size_t(k)] >= 0) {
      const auto& m = train.modes.modes[std::size_t(owner[std::size_t(k)])];
      offset = resonance(sys, k) - m.omega_res;
      om = sys.levels[std::size_t(k)].dipole * m.amplitude *
           std::exp(std::complex<Scalar>(0, -m.phase)) * f;
    }
    h(k + 1, k + 1) = offset - train.time.alpha_t * tau;
    h(k + 1, 0) = om;
    h(0, k + 1) = std::conj(om);
  }
  return h;
}

template <typename Scalar>
Trajectory<Scalar> propagate_rwa(const LevelSystem<Scalar>& sys,
                                 const PulseTrain<Scalar>& train,
                                 const PropagationSpec<Scalar>& spec) {
  const auto owner = assign_modes(sys, train.modes);
  const Eigen::Index n = sys.size();
  detail::RotatingRhs<Scalar> rhs;
  rhs.coupling = ComplexVector<Scalar>::Zero(n);
  rhs.offset = RealVector<Scalar>::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k)
    if (owner[std::size_t(k)] >= 0) {
      const auto& m = train.modes.modes[std::size_t(owner[std::size_t(k)])];
      rhs.coupling[k] = sys.levels[std::size_t(k)].dipole * m.amplitude *
                        std::exp(std::complex<Scalar>(0, -m.phase));
      rhs.offset[k] = resonance(sys, k) - m.omega_res;
    }
  rhs.alpha_t = train.time.alpha_t;
  rhs.t0 = train.chirp.t0;
  rhs.sigma_t = train.time.sigma_t;
  rhs.peak = train.time.peak;
  return detail::run_propagation(rhs, Frame::rotating, train.modes.omega0,
                                 sample_times(train, spec), n + 1, spec);
}

template <typename Scalar>
Trajectory<Scalar> propagate_modal(const LevelSystem<Scalar>& sys,
                                   const PulseTrain<Scalar>& train,
                                   const PropagationSpec<Scalar>& spec) {
  const Eigen::Index n = sys.size();
  detail::ModalRhs<Scalar> rhs;
  rhs.wtil_level.resize(n);
  rhs.dipole.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rhs.wtil_level[k] = resonance(sys, k) - train.modes.omega0;
    rhs.dipole[k] = sys.levels[std::size_t(k)].dipole;
  }
  const Eigen::Index nm = Eigen::Index(train.modes.modes.size());
  rhs.mode_amp.resize(nm);
  rhs.wtil_mode.resize(nm);
  for (Eigen::Index l = 0; l < nm; ++l) {
    const auto& m = train.modes.modes[std::size_t(l)];
    rhs.mode_amp[l] =
        m.amplitude * std::exp(std::complex<Scalar>(0, -m.phase));
    rhs.wtil_mode[l] = m.omega_res - train.modes.omega0;
  }
  rhs.alpha_t = train.time.alpha_t;
  rhs.t0 = train.chirp.t0;
  rhs.sigma_t = train.time.sigma_t;
  rhs.peak = train.time.peak;
  return detail::run_propagation(rhs, Frame::modal, train.modes.omega0,
                                 sample_times(train, spec), n + 1, spec);
}

template <typename Scalar>
Trajectory<Scalar> propagate_bare(const LevelSystem<Scalar>& sys,
                                  const PulseTrain<Scalar>& train,
                                  const PropagationSpec<Scalar>& spec) {
  if (!(spec.carrier_divisor >= 1))
    throw ConfigError("carrier_divisor: must be >= 1");
  const Eigen::Index n = sys.size();
  detail::BareRhs<Scalar> rhs;
  const Scalar carrier = train.modes.omega0 / spec.carrier_divisor;
  rhs.energy.resize(n);
  rhs.dipole.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rhs.energy[k] = resonance(sys, k) - train.modes.omega0 + carrier;
    rhs.dipole[k] = sys.levels[std::size_t(k)].dipole;
  }
  rhs.train = train;
  rhs.carrier = carrier;
  PropagationSpec<Scalar> s = spec;
  if (s.ode.max_step <= 0) {
    // Keep at least 20 accepted steps per carrier cycle.
    s.ode.max_step =
        std::min(Scalar(0.4), Scalar(kTwoPi) / carrier / Scalar(20));
  }
  return detail::run_propagation(rhs, Frame::bare, carrier,
                                 sample_times(train, spec), n + 1, s);
}

template <typename Scalar>
Trajectory<Scalar> propagate(const LevelSystem<Scalar>& sys,
                             const PulseTrain<Scalar>& train,
                             const PropagationSpec<Scalar>& spec) {
  switch (spec.frame) {
    case Frame::rotating: return propagate_rwa(sys, train, spec);
    case Frame::modal: return propagate_modal(sys, train, spec);
    default: return propagate_bare(sys, train, spec);
  }
}

// Interaction-picture view of a trajectory: removes each level's static
// frame rotation so slow amplitude dynamics is visible. Populations are
// unchanged; for the bare frame the fast carrier phases are stripped.
template <typename Scalar>
Trajectory<Scalar> to_rotating(const LevelSystem<Scalar>& sys,
                               const Trajectory<Scalar>& traj) {
  if (traj.frame != Frame::bare) return traj;
  Trajectory<Scalar> out = traj;
  const Eigen::Index n = sys.size();
  for (Eigen::Index j = 0; j < out.times.size(); ++j) {
    const Scalar t = out.times[j];
    for (Eigen::Index k = 0; k < n; ++k) {
      const Scalar e =
          resonance(sys, k) - sys.carrier + traj.carrier;  // shifted energy
      out.states(k + 1, j) *= std::exp(std::complex<Scalar>(0, e * t));
    }
  }
  return out;
}

// Final-state bookkeeping against the intended superposition.
template <typename Scalar>
struct TransferMetrics {
  Scalar norm_defect = 0;     // max | ||y||^2 - 1 | over stored samples
  Scalar ground_final = 0;    // population left behind
  Scalar transferred = 0;     // total target-manifold population
  Scalar spectator_leak = 0;  // total population outside ground and targets
  Scalar overlap = 0;         // |<target|final>|, amplitude level
  Scalar global_phase = 0;    // phase maximizing Re e^{i phi} <target|final>
  RealVector<Scalar> phase_errors;  // per-target residual phases, rad
  RealVector<Scalar> populations;   // final per-state populations
};

template <typename Scalar>
TransferMetrics<Scalar> metrics(const LevelSystem<Scalar>& sys,
                                const TargetSuperposition<Scalar>& target,
                                const Trajectory<Scalar>& traj) {
  TransferMetrics<Scalar> m;
  const Eigen::Index nt = traj.times.size();
  if (nt == 0) throw ConfigError("trajectory: empty");
  for (Eigen::Index j = 0; j < nt; ++j)
    m.norm_defect = std::max(
        m.norm_defect, std::abs(traj.states.col(j).squaredNorm() - Scalar(1)));
  const ComplexVector<Scalar> fin = traj.states.col(nt - 1);
  m.populations = fin.cwiseAbs2();
  m.ground_final = m.populations[0];
  const auto idx = target_indices(sys, target);
  std::complex<Scalar> amp(0, 0);
  for (std::size_t n = 0; n < idx.size(); ++n) {
    m.transferred += m.populations[idx[n] + 1];
    amp += std::conj(target.c[Eigen::Index(n)]) * fin[idx[n] + 1];
  }
  for (Eigen::Index k = 0; k < sys.size(); ++k) {
    bool is_target = false;
    for (const auto i : idx) is_target = is_target || (i == k);
    if (!is_target) m.spectator_leak += m.populations[k + 1];
  }
  m.overlap = std::abs(amp);
  m.global_phase = -std::arg(amp);
  m.phase_errors.resize(Eigen::Index(idx.size()));
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const std::complex<Scalar> rel =
        fin[idx[n] + 1] * std::exp(std::complex<Scalar>(0, m.global_phase)) *
        std::conj(target.c[Eigen::Index(n)]);
    m.phase_errors[Eigen::Index(n)] =
        (std::abs(rel) > 0) ? std::arg(rel) : Scalar(0);
  }
  return m;
}

}  // namespace pap
