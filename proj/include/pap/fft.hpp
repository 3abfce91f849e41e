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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>

#include <unsupported/Eigen/FFT>

#include "pap/errors.hpp"
#include "pap/pulse.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Discrete synthesis of the shaped field from its sampled spectrum, kept in
// baseband relative to the carrier omega0. Conventions (matching pulse.hpp):
//
//   field+(t) = Integral dw amp(w) e^{-iwt},   field = 2 Re field+,
//   envelope A(t):  field = Re{A(t) e^{i omega0 (t-t0)}}.
//
// With wtil = w - omega0, B(wtil) = amp(omega0 + wtil), and
// E(t) = Integral dwtil B(wtil) e^{-i wtil t}, one has exactly
// A(t) = 2 conj(E(t)) e^{i omega0 t0}.
//
// Grids are centered: t_j = t0 + (j - n/2) dt, wtil_k = (k - n/2) dw,
// dw dt = 2 pi / n, n a power of two, so one FFT maps B_k to E_j after
// center-shift twiddles.

namespace pap {

template <typename Scalar>
struct FourierGrid {
  Eigen::Index n = 0;   // samples, power of two
  Scalar dt = 0;        // fs
  Scalar dw = 0;        // rad/fs, dw*dt = 2*pi/n
  Scalar t0 = 0;        // time-grid center, fs
  Scalar omega0 = 0;    // baseband reference, rad/fs

  Scalar time(Eigen::Index j) const {
    return t0 + (Scalar(j) - Scalar(n / 2)) * dt;
  }
  Scalar baseband(Eigen::Index k) const {
    return (Scalar(k) - Scalar(n / 2)) * dw;
  }
  Scalar omega(Eigen::Index k) const { return omega0 + baseband(k); }
  Scalar period() const { return Scalar(n) * dt; }
};

// Chooses the smallest centered power-of-two grid whose period covers
// margin * span_sigmas * sigma_t, whose time step keeps at least
// samples_per_cycle points per carrier cycle of the highest window, and
// whose band covers every window to +-8 sigma_omega.
template <typename Scalar>
FourierGrid<Scalar> make_grid(const PulseTrain<Scalar>& train,
                              Scalar span_sigmas = 8, Scalar margin = 1.5,
                              Scalar samples_per_cycle = 4) {
  const Scalar period = margin * span_sigmas * train.time.sigma_t;
  Scalar w_abs = 0;
  Scalar w_base = 0;
  for (const auto& m : train.modes.modes) {
    w_abs = std::max(w_abs, std::abs(m.omega_res));
    w_base = std::max(w_base, std::abs(m.omega_res - train.modes.omega0));
  }
  w_abs += 8 * train.chirp.sigma_omega;
  w_base += 8 * train.chirp.sigma_omega;
  const Scalar dt_max = Scalar(kTwoPi) / (samples_per_cycle * w_abs);
  std::uint64_t n = std::bit_ceil(
      std::uint64_t(std::max<Scalar>(256, std::ceil(period / dt_max))));
  // The band edge pi/dt must clear the outermost window.
  while (Scalar(kPi) * Scalar(n) / period <= w_base) n *= 2;
  FourierGrid<Scalar> g;
  g.n = Eigen::Index(n);
  g.dt = period / Scalar(n);
  g.dw = Scalar(kTwoPi) / period;
  g.t0 = train.chirp.t0;
  g.omega0 = train.modes.omega0;
  return g;
}

template <typename Scalar>
struct SpectralField {
  FourierGrid<Scalar> grid;
  ComplexVector<Scalar> amp;  // B_k = amp(omega(k))
};

template <typename Scalar>
struct TemporalField {
  FourierGrid<Scalar> grid;
  ComplexVector<Scalar> env;  // A_j = envelope at time(j)
};

// Samples the analytic comb on the grid and zeroes coefficients below
// suppression_floor relative to the largest, modeling shaper dynamic range.
template <typename Scalar>
SpectralField<Scalar> build_spectrum(const PulseTrain<Scalar>& train,
                                     const FourierGrid<Scalar>& grid) {
  SpectralField<Scalar> s;
  s.grid = grid;
  s.amp.resize(grid.n);
  for (Eigen::Index k = 0; k < grid.n; ++k)
    s.amp[k] = spectral_amplitude(train, grid.omega(k));
  const Scalar cut =
      train.chirp.suppression_floor * s.amp.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < grid.n; ++k)
    if (std::abs(s.amp[k]) < cut) s.amp[k] = std::complex<Scalar>(0, 0);
  return s;
}

// i^r for integer r, exact.
template <typename Scalar>
std::complex<Scalar> unit_quarter_turn(std::int64_t r) {
  switch (((r % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// E_j = sum_k B_k e^{-i wtil_k t_j} dw via one forward FFT:
// E_j = dw * i^{-n} * (-1)^j * FFT[ B_k e^{-i wtil_k t0} (-1)^k ]_j,
// then A_j = 2 conj(E_j) e^{i omega0 t0}.
template <typename Scalar>
TemporalField<Scalar> synthesize_time(const SpectralField<Scalar>& s) {
  const auto& g = s.grid;
  ComplexVector<Scalar> work(g.n);
  for (Eigen::Index k = 0; k < g.n; ++k) {
    const Scalar sign = (k & 1) ? Scalar(-1) : Scalar(1);
    work[k] = s.amp[k] * sign *
              std::exp(std::complex<Scalar>(0, -g.baseband(k) * g.t0));
  }
  Eigen::FFT<Scalar> fft;
  ComplexVector<Scalar> out(g.n);
  fft.fwd(out, work);
  const std::complex<Scalar> quarter = unit_quarter_turn<Scalar>(-g.n);
  const std::complex<Scalar> carry =
      Scalar(2) * std::exp(std::complex<Scalar>(0, g.omega0 * g.t0));
  TemporalField<Scalar> t;
  t.grid = g;
  t.env.resize(g.n);
  for (Eigen::Index j = 0; j < g.n; ++j) {
    const Scalar sign = (j & 1) ? Scalar(-1) : Scalar(1);
    t.env[j] = carry * std::conj(g.dw * quarter * sign * out[j]);
  }
  return t;
}

// Exact inverse of synthesize_time on the same grid.
template <typename Scalar>
SpectralField<Scalar> analyze_spectrum(const TemporalField<Scalar>& t) {
  const auto& g = t.grid;
  const std::complex<Scalar> uncarry =
      std::exp(std::complex<Scalar>(0, g.omega0 * g.t0)) / Scalar(2);
  ComplexVector<Scalar> work(g.n);
  for (Eigen::Index j = 0; j < g.n; ++j) {
    const Scalar sign = (j & 1) ? Scalar(-1) : Scalar(1);
    work[j] = std::conj(t.env[j]) * uncarry * sign;
  }
  // Unnormalized inverse kernel sum_j x_j e^{+2 pi i jk/n} = conj(FFT[conj x]).
  for (Eigen::Index j = 0; j < g.n; ++j) work[j] = std::conj(work[j]);
  Eigen::FFT<Scalar> fft;
  ComplexVector<Scalar> out(g.n);
  fft.fwd(out, work);
  const std::complex<Scalar> quarter = unit_quarter_turn<Scalar>(g.n);
  SpectralField<Scalar> s;
  s.grid = g;
  s.amp.resize(g.n);
  for (Eigen::Index k = 0; k < g.n; ++k) {
    const Scalar sign = (k & 1) ? Scalar(-1) : Scalar(1);
    s.amp[k] = (g.dt / Scalar(kTwoPi)) * quarter * sign * std::conj(out[k]) *
               std::exp(std::complex<Scalar>(0, g.baseband(k) * g.t0));
  }
  return s;
}

// Energy functionals of the positive-frequency field; equal by Parseval.
template <typename Scalar>
Scalar field_energy(const TemporalField<Scalar>& t) {
  return t.env.squaredNorm() / 4 * t.grid.dt;
}

template <typename Scalar>
Scalar field_energy(const SpectralField<Scalar>& s) {
  return Scalar(kTwoPi) * s.amp.squaredNorm() * s.grid.dw;
}

// Real field samples on the grid at an arbitrary carrier (see real_field).
template <typename Scalar>
RealVector<Scalar> real_field_samples(const TemporalField<Scalar>& t,
                                      Scalar carrier) {
  RealVector<Scalar> f(t.grid.n);
  for (Eigen::Index j = 0; j < t.grid.n; ++j)
    f[j] = (t.env[j] * std::exp(std::complex<Scalar>(
                           0, carrier * (t.grid.time(j) - t.grid.t0))))
               .real();
  return f;
}

}  // namespace pap
