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

#include <atomic>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "pap/dynamics.hpp"
#include "pap/errors.hpp"
#include "pap/fft.hpp"
#include "pap/model.hpp"
#include "pap/pulse.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Field diagnostics (sub-pulse structure, time-frequency maps) and parameter
// scans of the transfer.

namespace pap {

// ---------------------------------------------------------------------------
// Sub-pulse structure of the synthesized envelope.

template <typename Scalar>
struct SubPulse {
  Scalar t_center = 0;   // refined peak time, fs
  Scalar amplitude = 0;  // |A| at the refined peak
  Scalar energy = 0;     // field energy inside this sub-pulse's segment
  Scalar phase = 0;      // arg A at the peak, rad, in (-pi, pi]
};

template <typename Scalar>
struct TrainFeatures {
  std::vector<SubPulse<Scalar>> pulses;  // in time order
  Scalar mean_spacing = 0;               // fs
};

// Locates sub-pulses as local maxima of |A| above `threshold` times the
// global maximum, refines each peak with a three-point parabola, and
// integrates the energy between midpoints of adjacent peaks.
template <typename Scalar>
TrainFeatures<Scalar> train_features(const TemporalField<Scalar>& field,
                                     Scalar threshold = Scalar(0.05)) {
  const Eigen::Index n = field.grid.n;
  RealVector<Scalar> mag(n);
  for (Eigen::Index j = 0; j < n; ++j) mag[j] = std::abs(field.env[j]);
  const Scalar cut = threshold * mag.maxCoeff();
  TrainFeatures<Scalar> out;
  std::vector<Eigen::Index> peaks;
  for (Eigen::Index j = 1; j + 1 < n; ++j)
    if (mag[j] >= cut && mag[j] > mag[j - 1] && mag[j] >= mag[j + 1])
      peaks.push_back(j);
  for (const Eigen::Index j : peaks) {
    const Scalar a = mag[j - 1], b = mag[j], c = mag[j + 1];
    const Scalar denom = a - 2 * b + c;
    const Scalar shift =
        (denom != 0) ? std::min(std::max(Scalar(0.5) * (a - c) / denom,
                                         Scalar(-0.5)),
                                Scalar(0.5))
                     : Scalar(0);
    SubPulse<Scalar> p;
    p.t_center = field.grid.time(j) + shift * field.grid.dt;
    p.amplitude = b - Scalar(0.25) * (a - c) * shift;
    const std::complex<Scalar> interp =
        (shift >= 0)
            ? field.env[j] * (1 - shift) + field.env[j + 1] * shift
            : field.env[j] * (1 + shift) - field.env[j - 1] * shift;
    p.phase = std::arg(interp);
    out.pulses.push_back(p);
  }
  // Segment energies between midpoints of adjacent peak times.
  const std::size_t np = out.pulses.size();
  for (std::size_t i = 0; i < np; ++i) {
    const Scalar lo = (i == 0) ? field.grid.time(0)
                               : (out.pulses[i - 1].t_center +
                                  out.pulses[i].t_center) / 2;
    const Scalar hi = (i + 1 == np) ? field.grid.time(n - 1)
                                    : (out.pulses[i].t_center +
                                       out.pulses[i + 1].t_center) / 2;
    Scalar acc = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar t = field.grid.time(j);
      if (t >= lo && t < hi) acc += mag[j] * mag[j];
    }
    out.pulses[i].energy = acc / 4 * field.grid.dt;
  }
  if (np > 1)
    out.mean_spacing =
        (out.pulses.back().t_center - out.pulses.front().t_center) /
        Scalar(np - 1);
  return out;
}

// Quadratic fit of the sub-pulse phases against pulse index. Raw phases wrap;
// they are rebuilt branch-safe from the center outward using wrapped second
// differences (valid while the curvature per step stays below pi, which a
// usable train always satisfies). Returns coefficients of
// phase(l) = c0 + c1*(l - lc) + c2*(l - lc)^2 about the central pulse lc,
// the curvature 2*c2, and the worst absolute fit residual.
template <typename Scalar>
struct QuadraticPhaseFit {
  Scalar c0 = 0, c1 = 0, c2 = 0;
  Scalar curvature = 0;     // 2*c2, rad per index^2
  Scalar max_residual = 0;  // rad
};

template <typename Scalar>
Scalar wrap_angle(Scalar x) {
  const Scalar two_pi = Scalar(kTwoPi);
  x = std::fmod(x + Scalar(kPi), two_pi);
  if (x <= 0) x += two_pi;
  return x - Scalar(kPi);
}

template <typename Scalar>
QuadraticPhaseFit<Scalar> quadratic_phase_fit(
    const TrainFeatures<Scalar>& features) {
  const Eigen::Index np = Eigen::Index(features.pulses.size());
  if (np < 3)
    throw ConfigError("phase fit: need at least 3 sub-pulses");
  // Center on the strongest pulse.
  Eigen::Index lc = 0;
  for (Eigen::Index l = 1; l < np; ++l)
    if (features.pulses[std::size_t(l)].amplitude >
        features.pulses[std::size_t(lc)].amplitude)
      lc = l;
  if (lc == 0) lc = 1;
  if (lc == np - 1) lc = np - 2;
  RealVector<Scalar> raw(np), y(np);
  for (Eigen::Index l = 0; l < np; ++l)
    raw[l] = features.pulses[std::size_t(l)].phase;
  y[lc] = raw[lc];
  // Forward reconstruction from the center.
  Scalar step = wrap_angle(raw[lc + 1] - raw[lc]);
  y[lc + 1] = y[lc] + step;
  for (Eigen::Index l = lc + 2; l < np; ++l) {
    step += wrap_angle(raw[l] - 2 * raw[l - 1] + raw[l - 2]);
    y[l] = y[l - 1] + step;
  }
  // Backward reconstruction continues the same difference chain through the
  // center: a second wrap seed could disagree with the forward one by 2*pi
  // when increments sit near the branch cut, bending the fit.
  step = wrap_angle(raw[lc + 1] - raw[lc]) -
         wrap_angle(raw[lc + 1] - 2 * raw[lc] + raw[lc - 1]);
  y[lc - 1] = y[lc] - step;
  for (Eigen::Index l = lc - 2; l >= 0; --l) {
    step -= wrap_angle(raw[l + 2] - 2 * raw[l + 1] + raw[l]);
    y[l] = y[l + 1] - step;
  }
  RealMatrix<Scalar> m(np, 3);
  for (Eigen::Index l = 0; l < np; ++l) {
    const Scalar x = Scalar(l - lc);
    m(l, 0) = 1;
    m(l, 1) = x;
    m(l, 2) = x * x;
  }
  const RealVector<Scalar> coef =
      m.colPivHouseholderQr().solve(y);
  QuadraticPhaseFit<Scalar> fit;
  fit.c0 = coef[0];
  fit.c1 = coef[1];
  fit.c2 = coef[2];
  fit.curvature = 2 * coef[2];
  const RealVector<Scalar> r = m * coef - y;
  fit.max_residual = r.cwiseAbs().maxCoeff();
  return fit;
}

// ---------------------------------------------------------------------------
// Time-frequency map (Gaussian-probe overlap spectrogram).

template <typename Scalar>
struct SpectrogramSpec {
  Scalar sigma_probe = 0;          // probe duration, fs
  RealVector<Scalar> probe_times;  // probe centers, fs
  RealVector<Scalar> probe_omegas; // probe frequencies, rad/fs
};

template <typename Scalar>
struct Spectrogram {
  RealVector<Scalar> times;
  RealVector<Scalar> omegas;
  ComplexMatrix<Scalar> q;  // omegas.size() x times.size()
};

// Unconjugated overlap of the field with the probe
//   probe(t) = exp[-((t-tp)/sp)^2/2 - i wp t + i (wp - w0) tp],
// reduced to the envelope:
//   Q = (1/2) e^{-i w0 t0} e^{i (wp-w0) tp}
//       Integral A(t) exp[-((t-tp)/sp)^2/2] e^{-i (wp-w0) t} dt.
// The counter-rotating half of the field contributes O(e^{-2(w0 sp)^2}) and
// is dropped. The sum is truncated beyond 8 probe widths.
template <typename Scalar>
Spectrogram<Scalar> husimi(const TemporalField<Scalar>& field,
                           const SpectrogramSpec<Scalar>& spec) {
  if (!(spec.sigma_probe > 0))
    throw ConfigError("spectrogram.sigma_probe: must be positive");
  const auto& g = field.grid;
  Spectrogram<Scalar> sg;
  sg.times = spec.probe_times;
  sg.omegas = spec.probe_omegas;
  sg.q.resize(spec.probe_omegas.size(), spec.probe_times.size());
  const std::complex<Scalar> global =
      Scalar(0.5) * std::exp(std::complex<Scalar>(0, -g.omega0 * g.t0));
  std::vector<std::complex<Scalar>> windowed;
  for (Eigen::Index it = 0; it < spec.probe_times.size(); ++it) {
    const Scalar tp = spec.probe_times[it];
    const Scalar reach = 8 * spec.sigma_probe;
    const Scalar sp2 = spec.sigma_probe * spec.sigma_probe;
    Eigen::Index jlo = Eigen::Index(
        std::ceil((tp - reach - g.time(0)) / g.dt));
    Eigen::Index jhi = Eigen::Index(
        std::floor((tp + reach - g.time(0)) / g.dt));
    jlo = std::max<Eigen::Index>(jlo, 0);
    jhi = std::min<Eigen::Index>(jhi, g.n - 1);
    windowed.assign(std::size_t(std::max<Eigen::Index>(jhi - jlo + 1, 0)),
                    std::complex<Scalar>(0, 0));
    for (Eigen::Index j = jlo; j <= jhi; ++j) {
      const Scalar d = g.time(j) - tp;
      windowed[std::size_t(j - jlo)] =
          field.env[j] * std::exp(-d * d / (2 * sp2));
    }
    for (Eigen::Index iw = 0; iw < spec.probe_omegas.size(); ++iw) {
      const Scalar wt = spec.probe_omegas[iw] - g.omega0;
      // Recurrent phasor e^{-i wt t_j} marches across the window.
      const std::complex<Scalar> rot =
          std::exp(std::complex<Scalar>(0, -wt * g.dt));
      std::complex<Scalar> ph =
          std::exp(std::complex<Scalar>(0, -wt * g.time(jlo)));
      std::complex<Scalar> acc(0, 0);
      for (std::size_t j = 0; j < windowed.size(); ++j) {
        acc += windowed[j] * ph;
        ph *= rot;
      }
      sg.q(iw, it) = global * std::exp(std::complex<Scalar>(0, wt * tp)) *
                     acc * g.dt;
    }
  }
  return sg;
}

// Frequencies of the stripes in the column nearest to time t: local maxima
// of |Q| along the frequency axis above one tenth of the column maximum.
template <typename Scalar>
std::vector<Scalar> stripe_crossings(const Spectrogram<Scalar>& sg,
                                     Scalar t) {
  if (sg.times.size() == 0 || sg.omegas.size() < 3)
    throw ConfigError("spectrogram: too small for stripe analysis");
  Eigen::Index col = 0;
  for (Eigen::Index it = 1; it < sg.times.size(); ++it)
    if (std::abs(sg.times[it] - t) < std::abs(sg.times[col] - t)) col = it;
  RealVector<Scalar> mag(sg.omegas.size());
  for (Eigen::Index iw = 0; iw < sg.omegas.size(); ++iw)
    mag[iw] = std::abs(sg.q(iw, col));
  const Scalar cut = Scalar(0.1) * mag.maxCoeff();
  std::vector<Scalar> hits;
  for (Eigen::Index iw = 1; iw + 1 < sg.omegas.size(); ++iw)
    if (mag[iw] >= cut && mag[iw] > mag[iw - 1] && mag[iw] >= mag[iw + 1])
      hits.push_back(sg.omegas[iw]);
  return hits;
}

// ---------------------------------------------------------------------------
// Parameter scans.

template <typename Scalar>
struct ScanResult {
  RealVector<Scalar> alphas;  // row axis: spectral chirp values
  RealVector<Scalar> scales;  // column axis: coupling scale values
  RealMatrix<Scalar> transferred;
  RealMatrix<Scalar> overlap;
  RealMatrix<Scalar> ground;
  RealMatrix<Scalar> leak;
};

// Propagates one cell per (alpha_omega, scale) pair and tabulates the
// transfer metrics. Cells are independent; with several workers each cell is
// still computed identically and written to its own slot, so results do not
// depend on the worker count.
template <typename Scalar>
ScanResult<Scalar> scan_2d(const LevelSystem<Scalar>& sys,
                           const TargetSuperposition<Scalar>& target,
                           const ChirpParams<Scalar>& base,
                           const RealVector<Scalar>& alphas,
                           const RealVector<Scalar>& scales,
                           const PropagationSpec<Scalar>& prop,
                           int workers = 1) {
  if (alphas.size() == 0 || scales.size() == 0)
    throw ConfigError("scan: empty axis");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  ScanResult<Scalar> res;
  res.alphas = alphas;
  res.scales = scales;
  res.transferred.resize(alphas.size(), scales.size());
  res.overlap.resize(alphas.size(), scales.size());
  res.ground.resize(alphas.size(), scales.size());
  res.leak.resize(alphas.size(), scales.size());
  const Eigen::Index cells = alphas.size() * scales.size();
  std::atomic<Eigen::Index> next(0);
  auto body = [&]() {
    for (;;) {
      const Eigen::Index cell = next.fetch_add(1);
      if (cell >= cells) return;
      const Eigen::Index i = cell / scales.size();
      const Eigen::Index j = cell % scales.size();
      ChirpParams<Scalar> cp = base;
      cp.alpha_omega = alphas[i];
      const ModeSet<Scalar> modes = derive_modes(sys, target, scales[j]);
      const PulseTrain<Scalar> train = pulse_train(modes, cp);
      const Trajectory<Scalar> traj = propagate(sys, train, prop);
      const TransferMetrics<Scalar> m = metrics(sys, target, traj);
      res.transferred(i, j) = m.transferred;
      res.overlap(i, j) = m.overlap;
      res.ground(i, j) = m.ground_final;
      res.leak(i, j) = m.spectator_leak;
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  return res;
}

template <typename Scalar>
struct SigmaScanResult {
  RealVector<Scalar> sigmas;
  Scalar half_spacing = 0;  // selectivity scale the widths are judged against
  RealVector<Scalar> transferred;
  RealVector<Scalar> overlap;
  RealVector<Scalar> ground;
  RealVector<Scalar> leak;
};

// One-dimensional robustness scan over the spectral window width.
template <typename Scalar>
SigmaScanResult<Scalar> scan_sigma(const LevelSystem<Scalar>& sys,
                                   const TargetSuperposition<Scalar>& target,
                                   const ChirpParams<Scalar>& base,
                                   Scalar scale,
                                   const RealVector<Scalar>& sigmas,
                                   const PropagationSpec<Scalar>& prop) {
  if (sigmas.size() == 0) throw ConfigError("scan: empty axis");
  SigmaScanResult<Scalar> res;
  res.sigmas = sigmas;
  res.half_spacing = half_min_spacing(sys, target);
  res.transferred.resize(sigmas.size());
  res.overlap.resize(sigmas.size());
  res.ground.resize(sigmas.size());
  res.leak.resize(sigmas.size());
  const ModeSet<Scalar> modes = derive_modes(sys, target, scale);
  for (Eigen::Index i = 0; i < sigmas.size(); ++i) {
    ChirpParams<Scalar> cp = base;
    cp.sigma_omega = sigmas[i];
    const PulseTrain<Scalar> train = pulse_train(modes, cp);
    const Trajectory<Scalar> traj = propagate(sys, train, prop);
    const TransferMetrics<Scalar> m = metrics(sys, target, traj);
    res.transferred[i] = m.transferred;
    res.overlap[i] = m.overlap;
    res.ground[i] = m.ground_final;
    res.leak[i] = m.spectator_leak;
  }
  return res;
}

// Extremes of a metric over an index window [r0, r1] x [c0, c1], inclusive.
template <typename Scalar>
struct WindowStats {
  Scalar min = 0, max = 0, mean = 0;
};

template <typename Scalar>
WindowStats<Scalar> window_stats(const RealMatrix<Scalar>& m, Eigen::Index r0,
                                 Eigen::Index r1, Eigen::Index c0,
                                 Eigen::Index c1) {
  if (r0 < 0 || c0 < 0 || r1 >= m.rows() || c1 >= m.cols() || r0 > r1 ||
      c0 > c1)
    throw ConfigError("window: indices out of range");
  const auto block = m.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1);
  return WindowStats<Scalar>{block.minCoeff(), block.maxCoeff(),
                             block.mean()};
}

}  // namespace pap
