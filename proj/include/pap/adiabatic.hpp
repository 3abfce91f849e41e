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

#include "pap/dynamics.hpp"
#include "pap/errors.hpp"
#include "pap/model.hpp"
#include "pap/pulse.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Adiabatic eigenstructure of the equal-detuning rotating-frame Hamiltonian
//
//   H = [ 0        conj(W)^T ]      W_n = coupling into level n,
//       [ W        Delta I   ]      common detuning Delta on the manifold.
//
// Only the ground level and one "bright" superposition b_f = W/|W| mix; the
// orthogonal complement of b_f inside the manifold is dark at eigenvalue
// Delta. The two bright eigenpairs are
//
//   lambda_pm = Delta/2 pm sqrt(Delta^2/4 + W_eff^2),  W_eff = |W|,
//   |pm> = sin(theta_pm)|0> + cos(theta_pm)|b_f>,  tan(theta_pm) =
//          W_eff/lambda_pm,  theta_- = theta_+ - pi/2,
//
// so tan(theta_+) tan(theta_-) = -1 always. Because every coupling shares
// the one envelope, b_f (and with it the dark subspace) is constant in time;
// only theta moves. The field is engineered so the system enters in |0>,
// rides one bright state, and exits in |b_f> = the intended superposition.

namespace pap {

template <typename Scalar>
struct BrightDark {
  Scalar lambda_plus = 0;
  Scalar lambda_minus = 0;
  Scalar theta_plus = 0;   // in [0, pi/2]
  Scalar theta_minus = 0;  // theta_plus - pi/2
  Scalar omega_eff = 0;
  ComplexVector<Scalar> bf;  // unit bright shape over the manifold
};

template <typename Scalar>
BrightDark<Scalar> bright_dark(const ComplexVector<Scalar>& omega,
                               Scalar delta) {
  BrightDark<Scalar> bd;
  bd.omega_eff = omega.norm();
  if (bd.omega_eff == 0 && delta == 0)
    throw NumericsError(
        "bright basis undefined at zero coupling and zero detuning");
  const Scalar root =
      std::sqrt(delta * delta / 4 + bd.omega_eff * bd.omega_eff);
  bd.lambda_plus = delta / 2 + root;
  bd.lambda_minus = delta / 2 - root;
  // theta_+ = atan2(W_eff, lambda_+) = atan2(2 W_eff, Delta)/2; the latter
  // form stays continuous through W_eff = 0 at negative detuning.
  bd.theta_plus = std::atan2(2 * bd.omega_eff, delta) / 2;
  bd.theta_minus = bd.theta_plus - Scalar(kPi) / 2;
  bd.bf = (bd.omega_eff > 0)
              ? ComplexVector<Scalar>(omega / bd.omega_eff)
              : ComplexVector<Scalar>(ComplexVector<Scalar>::Zero(omega.size()));
  return bd;
}

// The full (N+1)-dimensional Hamiltonian of the structure above.
template <typename Scalar>
ComplexMatrix<Scalar> equal_detuning_hamiltonian(
    const ComplexVector<Scalar>& omega, Scalar delta) {
  const Eigen::Index n = omega.size();
  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(n + 1, n + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    h(k + 1, 0) = omega[k];
    h(0, k + 1) = std::conj(omega[k]);
    h(k + 1, k + 1) = delta;
  }
  return h;
}

// Orthonormal dark vectors spanning the complement of bf in the manifold,
// built by Gram-Schmidt over the level basis in level order (the candidate
// most parallel to bf is the one dropped). Deterministic by construction.
template <typename Scalar>
ComplexMatrix<Scalar> dark_basis(const ComplexVector<Scalar>& bf) {
  const Eigen::Index n = bf.size();
  if (n < 1 || std::abs(bf.norm() - Scalar(1)) > Scalar(1e-8))
    throw NumericsError("dark basis requires a unit bright shape");
  ComplexMatrix<Scalar> d(n, n - 1);
  Eigen::Index built = 0;
  for (Eigen::Index k = 0; k < n && built < n - 1; ++k) {
    ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(n);
    v[k] = std::complex<Scalar>(1, 0);
    v -= bf * (bf.dot(v));
    for (Eigen::Index j = 0; j < built; ++j)
      v -= d.col(j) * (d.col(j).dot(v));
    const Scalar nv = v.norm();
    if (nv > Scalar(1e-6)) d.col(built++) = v / nv;
  }
  if (built != n - 1)
    throw NumericsError("dark basis construction lost rank");
  return d;
}

// Adiabatic frame: columns are the bright "+" and "-" eigenvectors followed
// by the dark vectors (eigenvalue Delta), embedded in the full space.
template <typename Scalar>
ComplexMatrix<Scalar> frame_matrix(const BrightDark<Scalar>& bd) {
  const Eigen::Index n = bd.bf.size();
  if (!(bd.bf.norm() > 0))
    throw NumericsError("frame matrix requires a bright shape");
  ComplexMatrix<Scalar> u = ComplexMatrix<Scalar>::Zero(n + 1, n + 1);
  u(0, 0) = std::sin(bd.theta_plus);
  u.col(0).tail(n) = std::cos(bd.theta_plus) * bd.bf;
  u(0, 1) = std::sin(bd.theta_minus);
  u.col(1).tail(n) = std::cos(bd.theta_minus) * bd.bf;
  const ComplexMatrix<Scalar> d = dark_basis(bd.bf);
  for (Eigen::Index j = 0; j + 1 < n; ++j) u.col(2 + j).tail(n) = d.col(j);
  return u;
}

// Instantaneous bright/dark decomposition of the train at time t: couplings
// scale*c_n*f(t) and common detuning -alpha_t*(t-t0). The bright shape is
// taken from the (time-independent) coupling shape so it stays defined at
// vanishing envelope.
template <typename Scalar>
BrightDark<Scalar> bright_dark_at(const LevelSystem<Scalar>& sys,
                                  const PulseTrain<Scalar>& train, Scalar t) {
  const Eigen::Index nm = Eigen::Index(train.modes.modes.size());
  ComplexVector<Scalar> shape(nm);
  for (Eigen::Index l = 0; l < nm; ++l) {
    const auto& m = train.modes.modes[std::size_t(l)];
    shape[l] = sys.levels[std::size_t(m.level)].dipole * m.amplitude *
               std::exp(std::complex<Scalar>(0, -m.phase));
  }
  const Scalar f = envelope_gaussian(train, t);
  const Scalar delta = -train.time.alpha_t * (t - train.chirp.t0);
  ComplexVector<Scalar> omega = shape * f;
  BrightDark<Scalar> bd = bright_dark(omega, delta);
  if (!(bd.bf.norm() > 0) && shape.norm() > 0) bd.bf = shape / shape.norm();
  return bd;
}

// Mixing-angle velocity of the train, d theta_+/dt, analytic.
template <typename Scalar>
Scalar theta_dot(const PulseTrain<Scalar>& train, Scalar t) {
  const Scalar tau = t - train.chirp.t0;
  const Scalar st2 = train.time.sigma_t * train.time.sigma_t;
  const Scalar f = envelope_gaussian(train, t);
  const Scalar w = train.modes.scale * f;        // W_eff
  const Scalar wdot = -w * tau / st2;
  const Scalar delta = -train.time.alpha_t * tau;
  const Scalar ddot = -train.time.alpha_t;
  const Scalar denom = delta * delta + 4 * w * w;
  if (denom == 0) throw NumericsError("mixing angle undefined");
  return (wdot * delta - w * ddot) / denom;
}

// Nonadiabatic coupling K = U^dag dU/dt by a centered difference, with each
// displaced column phase-aligned to the central frame before differencing.
// For this structure only the bright 2x2 block is nonzero, with entries
// -+ d theta/dt.
template <typename Scalar>
ComplexMatrix<Scalar> nonadiabatic_matrix(const LevelSystem<Scalar>& sys,
                                          const PulseTrain<Scalar>& train,
                                          Scalar t, Scalar dt) {
  if (!(dt > 0)) throw ConfigError("dt: must be positive");
  const ComplexMatrix<Scalar> u0 =
      frame_matrix(bright_dark_at(sys, train, t));
  auto aligned = [&u0](ComplexMatrix<Scalar> u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const std::complex<Scalar> z = u0.col(c).dot(u.col(c));
      if (std::abs(z) > 0) u.col(c) *= std::conj(z) / std::abs(z);
    }
    return u;
  };
  const ComplexMatrix<Scalar> up =
      aligned(frame_matrix(bright_dark_at(sys, train, t + dt)));
  const ComplexMatrix<Scalar> um =
      aligned(frame_matrix(bright_dark_at(sys, train, t - dt)));
  return u0.adjoint() * ((up - um) / (2 * dt));
}

// |d theta/dt| / (lambda_+ - lambda_-): the adiabaticity ratio; passage is
// adiabatic where it stays well below one.
template <typename Scalar>
Scalar adiabaticity(const PulseTrain<Scalar>& train, Scalar t) {
  const Scalar tau = t - train.chirp.t0;
  const Scalar w = train.modes.scale * envelope_gaussian(train, t);
  const Scalar delta = -train.time.alpha_t * tau;
  const Scalar gap = std::sqrt(delta * delta + 4 * w * w);
  if (gap == 0) throw NumericsError("bright gap vanished");
  return std::abs(theta_dot(train, t)) / gap;
}

template <typename Scalar>
Scalar max_adiabaticity(const PulseTrain<Scalar>& train,
                        const RealVector<Scalar>& times) {
  Scalar worst = 0;
  for (Eigen::Index i = 0; i < times.size(); ++i)
    worst = std::max(worst, adiabaticity(train, times[i]));
  return worst;
}

// Population of the dark part of the target manifold along a trajectory:
// total manifold population minus the bright-shape component. Stays near
// zero while the passage is clean.
template <typename Scalar>
RealVector<Scalar> dark_population(const LevelSystem<Scalar>& sys,
                                   const TargetSuperposition<Scalar>& target,
                                   const Trajectory<Scalar>& traj) {
  const auto idx = target_indices(sys, target);
  RealVector<Scalar> dark(traj.times.size());
  for (Eigen::Index j = 0; j < traj.times.size(); ++j) {
    Scalar total = 0;
    std::complex<Scalar> amp(0, 0);
    for (std::size_t n = 0; n < idx.size(); ++n) {
      const std::complex<Scalar> b = traj.states(idx[n] + 1, j);
      total += std::norm(b);
      amp += std::conj(target.c[Eigen::Index(n)]) * b;
    }
    dark[j] = total - std::norm(amp);
  }
  return dark;
}

// Time series of the adiabatic diagnostics along a trajectory's samples.
template <typename Scalar>
struct AdiabaticSeries {
  RealVector<Scalar> times;
  RealVector<Scalar> lambda_plus;
  RealVector<Scalar> lambda_minus;
  RealVector<Scalar> delta;
  RealVector<Scalar> omega_eff;
  RealVector<Scalar> dark;
  RealVector<Scalar> ratio;
};

template <typename Scalar>
AdiabaticSeries<Scalar> adiabatic_series(
    const LevelSystem<Scalar>& sys, const TargetSuperposition<Scalar>& target,
    const PulseTrain<Scalar>& train, const Trajectory<Scalar>& traj) {
  AdiabaticSeries<Scalar> s;
  const Eigen::Index n = traj.times.size();
  s.times = traj.times;
  s.lambda_plus.resize(n);
  s.lambda_minus.resize(n);
  s.delta.resize(n);
  s.omega_eff.resize(n);
  s.ratio.resize(n);
  s.dark = dark_population(sys, target, traj);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar t = traj.times[j];
    const Scalar tau = t - train.chirp.t0;
    const Scalar w = train.modes.scale * envelope_gaussian(train, t);
    const Scalar d = -train.time.alpha_t * tau;
    const Scalar root = std::sqrt(d * d / 4 + w * w);
    s.omega_eff[j] = w;
    s.delta[j] = d;
    s.lambda_plus[j] = d / 2 + root;
    s.lambda_minus[j] = d / 2 - root;
    s.ratio[j] = (root > 0) ? adiabaticity(train, t) : Scalar(0);
  }
  return s;
}

}  // namespace pap
