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
#include <vector>

#include <Eigen/Geometry>

#include "pap/errors.hpp"
#include "pap/pulse.hpp"
#include "pap/types.hpp"
#include "pap/units.hpp"

// Piecewise two-level picture of the passage. Between sub-pulses the bright
// doublet only accumulates relative phase; during a sub-pulse it is driven.
// On the Bloch sphere of {ground, bright} with the ground level at the north
// pole, sub-pulse l acts as
//
//   U_l = F_l P_l,   P_l = Ry(alpha_P^l),  F_l = Rz(alpha_F^l),
//
// with pulse area alpha_P^l = Integral_slice 2 W_eff dt and accumulated
// detuning phase alpha_F^l = -Integral_slice Delta dt. The net per-pulse
// rotation has a fixed axis when the areas repeat; for small areas that axis
// is approximated by closed-form spherical angles (approx_axis). A passage
// is piecewise adiabatic when the axis turns little between consecutive
// pulses compared with the per-pulse rotation angle.

namespace pap {

template <typename Scalar>
struct PulseRotation {
  Scalar alpha_p = 0;  // driven polar rotation, rad; non-negative
  Scalar alpha_f = 0;  // free azimuthal rotation, rad
};

template <typename Scalar>
struct PulseSchedule {
  std::vector<PulseRotation<Scalar>> pulses;
};

template <typename Scalar>
void validate(const PulseSchedule<Scalar>& s) {
  for (std::size_t l = 0; l < s.pulses.size(); ++l)
    if (s.pulses[l].alpha_p < 0)
      throw ConfigError("pulses[" + std::to_string(l) +
                        "].alpha_p: negative area");
}

// True when every rotation angle is below pi, the regime in which the
// per-pulse axis-angle picture is immediately meaningful. Schedules from
// strongly chirped fields can exceed it on the outer pulses and still work:
// near the poles large azimuthal turns are inert.
template <typename Scalar>
bool piecewise_regime(const PulseSchedule<Scalar>& s) {
  for (const auto& p : s.pulses)
    if (std::abs(p.alpha_p) >= Scalar(kPi) || std::abs(p.alpha_f) >= Scalar(kPi))
      return false;
  return true;
}

template <typename Scalar>
Eigen::Quaternion<Scalar> compose_rotations(Scalar alpha_p, Scalar alpha_f) {
  using V3 = Eigen::Matrix<Scalar, 3, 1>;
  const Eigen::Quaternion<Scalar> qy(
      Eigen::AngleAxis<Scalar>(alpha_p, V3::UnitY()));
  const Eigen::Quaternion<Scalar> qz(
      Eigen::AngleAxis<Scalar>(alpha_f, V3::UnitZ()));
  return qz * qy;
}

template <typename Scalar>
struct RotationAxis {
  Eigen::Matrix<Scalar, 3, 1> axis;  // unit; z for the identity rotation
  Scalar angle = 0;                  // in [0, pi]
};

// Canonical axis-angle of a unit quaternion: real part made non-negative,
// identity mapped to axis z at angle zero.
template <typename Scalar>
RotationAxis<Scalar> axis_angle(Eigen::Quaternion<Scalar> q) {
  if (q.w() < 0) q.coeffs() = -q.coeffs();
  RotationAxis<Scalar> r;
  const Scalar vnorm = q.vec().norm();
  r.angle = 2 * std::atan2(vnorm, q.w());
  r.axis = (vnorm > 0) ? Eigen::Matrix<Scalar, 3, 1>(q.vec() / vnorm)
                       : Eigen::Matrix<Scalar, 3, 1>(0, 0, 1);
  return r;
}

// Closed-form small-area approximation of the per-pulse rotation: angle
// alpha_0 = sqrt((alpha_p^2 + alpha_f^2)/2) about the axis with polar angle
// theta_0, tan(theta_0) = +-alpha_p/alpha_f, and azimuth
// phi_0 = +-pi/2 - alpha_f/2. The two sign branches describe the same line
// through the sphere; alpha_f = 0 pins theta_0 to +-pi/2.
template <typename Scalar>
RotationAxis<Scalar> approx_axis(Scalar alpha_p, Scalar alpha_f,
                                 bool positive_branch = true) {
  const Scalar s = positive_branch ? Scalar(1) : Scalar(-1);
  const Scalar theta0 = std::atan2(s * alpha_p, alpha_f);
  const Scalar phi0 = s * Scalar(kPi) / 2 - alpha_f / 2;
  RotationAxis<Scalar> r;
  r.axis = Eigen::Matrix<Scalar, 3, 1>(std::sin(theta0) * std::cos(phi0),
                                       std::sin(theta0) * std::sin(phi0),
                                       std::cos(theta0));
  r.angle =
      std::sqrt((alpha_p * alpha_p + alpha_f * alpha_f) / 2);
  return r;
}

template <typename Scalar>
Eigen::Quaternion<Scalar> net_rotation(const PulseSchedule<Scalar>& s) {
  Eigen::Quaternion<Scalar> q = Eigen::Quaternion<Scalar>::Identity();
  for (const auto& p : s.pulses)
    q = compose_rotations(p.alpha_p, p.alpha_f) * q;
  return q;
}

// Bloch trajectory under the schedule; column l is the state after l pulses,
// starting from r0 (the ground level is +z).
template <typename Scalar>
RealMatrix<Scalar> run_schedule(
    const PulseSchedule<Scalar>& s,
    Eigen::Matrix<Scalar, 3, 1> r0 = Eigen::Matrix<Scalar, 3, 1>(0, 0, 1)) {
  validate(s);
  RealMatrix<Scalar> out(3, Eigen::Index(s.pulses.size()) + 1);
  out.col(0) = r0;
  Eigen::Matrix<Scalar, 3, 1> r = r0;
  for (std::size_t l = 0; l < s.pulses.size(); ++l) {
    r = compose_rotations(s.pulses[l].alpha_p, s.pulses[l].alpha_f) * r;
    out.col(Eigen::Index(l) + 1) = r;
  }
  return out;
}

// Extracts the piecewise schedule of a train: slices one beat period wide
// centered at t0 + (l - (L-1)/2) T, areas by Simpson integration of
// 2 W_eff(t), free phases in closed form from the linear detuning sweep.
template <typename Scalar>
PulseSchedule<Scalar> schedule_from_field(const PulseTrain<Scalar>& train,
                                          Scalar beat, Eigen::Index n_pulses) {
  if (!(beat > 0)) throw ConfigError("beat: must be positive");
  if (n_pulses < 1) throw ConfigError("pulses: need at least 1");
  PulseSchedule<Scalar> s;
  s.pulses.reserve(std::size_t(n_pulses));
  constexpr Eigen::Index kPanels = 400;  // Simpson panels per slice
  for (Eigen::Index l = 0; l < n_pulses; ++l) {
    const Scalar center =
        train.chirp.t0 + (Scalar(l) - Scalar(n_pulses - 1) / 2) * beat;
    const Scalar a = center - beat / 2;
    const Scalar b = center + beat / 2;
    const Scalar h = (b - a) / Scalar(kPanels);
    auto omega2 = [&](Scalar t) {
      return 2 * train.modes.scale * envelope_gaussian(train, t);
    };
    Scalar acc = omega2(a) + omega2(b);
    for (Eigen::Index i = 1; i < kPanels; ++i)
      acc += omega2(a + Scalar(i) * h) * ((i & 1) ? 4 : 2);
    PulseRotation<Scalar> p;
    p.alpha_p = acc * h / 3;
    const Scalar ta = a - train.chirp.t0;
    const Scalar tb = b - train.chirp.t0;
    p.alpha_f = train.time.alpha_t * (tb * tb - ta * ta) / 2;
    s.pulses.push_back(p);
  }
  return s;
}

// Worst ratio of axis turning to per-pulse rotation angle between
// consecutive pulses; well below one means piecewise adiabatic following.
// Identity pulses are skipped.
template <typename Scalar>
Scalar adiabaticity_piecewise(const PulseSchedule<Scalar>& s) {
  Scalar worst = 0;
  bool have_prev = false;
  Scalar prev_theta = 0;
  for (const auto& p : s.pulses) {
    const Scalar a0 =
        std::sqrt((p.alpha_p * p.alpha_p + p.alpha_f * p.alpha_f) / 2);
    if (a0 == 0) continue;
    const Scalar theta = std::atan2(p.alpha_p, p.alpha_f);
    if (have_prev) worst = std::max(worst, std::abs(theta - prev_theta) / a0);
    prev_theta = theta;
    have_prev = true;
  }
  return worst;
}

}  // namespace pap
