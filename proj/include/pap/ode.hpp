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
#include <cstdint>

#include "pap/errors.hpp"
#include "pap/types.hpp"

// Adaptive Dormand-Prince 5(4) and fixed-step classical RK4 integrators for
// complex coefficient vectors. The adaptive path is the default for physics
// runs; the fixed-step path exists for bit-reproducible outputs (same input
// and step count give byte-identical results on one platform).

namespace pap {

template <typename Scalar>
struct OdeOptions {
  Scalar rtol = Scalar(1e-10);
  Scalar atol = Scalar(1e-12);
  Scalar max_step = Scalar(0);    // 0: unbounded
  Scalar first_step = Scalar(0);  // 0: choose automatically
  std::int64_t max_steps = 50'000'000;
};

struct OdeStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t evals = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau (FSAL: stage 7 equals the next step's stage 1).
inline constexpr double kDpC[7] = {0.0,    1.0 / 5, 3.0 / 10, 4.0 / 5,
                                   8.0 / 9, 1.0,     1.0};
inline constexpr double kDpA21 = 1.0 / 5;
inline constexpr double kDpA31 = 3.0 / 40, kDpA32 = 9.0 / 40;
inline constexpr double kDpA41 = 44.0 / 45, kDpA42 = -56.0 / 15,
                        kDpA43 = 32.0 / 9;
inline constexpr double kDpA51 = 19372.0 / 6561, kDpA52 = -25360.0 / 2187,
                        kDpA53 = 64448.0 / 6561, kDpA54 = -212.0 / 729;
inline constexpr double kDpA61 = 9017.0 / 3168, kDpA62 = -355.0 / 33,
                        kDpA63 = 46732.0 / 5247, kDpA64 = 49.0 / 176,
                        kDpA65 = -5103.0 / 18656;
// Fifth-order weights (also the seventh-stage coefficients).
inline constexpr double kDpB1 = 35.0 / 384, kDpB3 = 500.0 / 1113,
                        kDpB4 = 125.0 / 192, kDpB5 = -2187.0 / 6784,
                        kDpB6 = 11.0 / 84;
// Difference between the fifth- and embedded fourth-order weights.
inline constexpr double kDpE1 = 71.0 / 57600, kDpE3 = -71.0 / 16695,
                        kDpE4 = 71.0 / 1920, kDpE5 = -17253.0 / 339200,
                        kDpE6 = 22.0 / 525, kDpE7 = -1.0 / 40;

template <typename Scalar>
Scalar error_norm(const ComplexVector<Scalar>& err,
                  const ComplexVector<Scalar>& y0,
                  const ComplexVector<Scalar>& y1, Scalar atol, Scalar rtol) {
  Scalar acc = 0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar scale =
        atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const Scalar q = std::abs(err[i]) / scale;
    acc += q * q;
  }
  return std::sqrt(acc / Scalar(n));
}

}  // namespace detail

// Integrates dy/dt = rhs(t, y) from t0 to t1 (either direction) in place.
// `rhs` is called as rhs(t, y, dydt) and must fill `dydt`.
template <typename Scalar, typename Rhs>
OdeStats integrate_adaptive(Rhs&& rhs, Scalar t0, Scalar t1,
                            ComplexVector<Scalar>& y,
                            const OdeOptions<Scalar>& opt = {}) {
  using namespace detail;
  OdeStats stats;
  if (t1 == t0) return stats;
  const Scalar dir = (t1 > t0) ? Scalar(1) : Scalar(-1);
  const Eigen::Index n = y.size();

  ComplexVector<Scalar> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  ComplexVector<Scalar> ytmp(n), ynew(n), yerr(n);

  rhs(t0, y, k1);
  ++stats.evals;

  Scalar h;
  if (opt.first_step > 0) {
    h = opt.first_step;
  } else {
    // Conservative guess; the controller converges within a few steps.
    const Scalar ynorm = y.norm() + opt.atol;
    const Scalar fnorm = k1.norm() + Scalar(1e-300);
    h = std::min(Scalar(0.01) * ynorm / fnorm, std::abs(t1 - t0));
  }
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  h *= dir;

  Scalar t = t0;
  while ((t1 - t) * dir > 0) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw NumericsError("integrator exceeded the step budget");
    if (std::abs(h) <=
        Scalar(4) * std::numeric_limits<Scalar>::epsilon() *
            std::max(std::abs(t), Scalar(1)))
      throw NumericsError("integrator step size underflow");
    if ((t + h - t1) * dir > 0) h = t1 - t;

    ytmp = y + h * (Scalar(kDpA21) * k1);
    rhs(t + Scalar(kDpC[1]) * h, ytmp, k2);
    ytmp = y + h * (Scalar(kDpA31) * k1 + Scalar(kDpA32) * k2);
    rhs(t + Scalar(kDpC[2]) * h, ytmp, k3);
    ytmp = y + h * (Scalar(kDpA41) * k1 + Scalar(kDpA42) * k2 +
                    Scalar(kDpA43) * k3);
    rhs(t + Scalar(kDpC[3]) * h, ytmp, k4);
    ytmp = y + h * (Scalar(kDpA51) * k1 + Scalar(kDpA52) * k2 +
                    Scalar(kDpA53) * k3 + Scalar(kDpA54) * k4);
    rhs(t + Scalar(kDpC[4]) * h, ytmp, k5);
    ytmp = y + h * (Scalar(kDpA61) * k1 + Scalar(kDpA62) * k2 +
                    Scalar(kDpA63) * k3 + Scalar(kDpA64) * k4 +
                    Scalar(kDpA65) * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (Scalar(kDpB1) * k1 + Scalar(kDpB3) * k3 +
                    Scalar(kDpB4) * k4 + Scalar(kDpB5) * k5 +
                    Scalar(kDpB6) * k6);
    rhs(t + h, ynew, k7);
    stats.evals += 6;

    yerr = h * (Scalar(kDpE1) * k1 + Scalar(kDpE3) * k3 + Scalar(kDpE4) * k4 +
                Scalar(kDpE5) * k5 + Scalar(kDpE6) * k6 + Scalar(kDpE7) * k7);
    const Scalar err = error_norm(yerr, y, ynew, opt.atol, opt.rtol);

    Scalar factor = (err > 0) ? Scalar(0.9) * std::pow(err, Scalar(-0.2))
                              : Scalar(10);
    factor = std::clamp(factor, Scalar(0.2), Scalar(10));

    if (err <= Scalar(1)) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      ++stats.accepted;
    } else {
      ++stats.rejected;
    }
    h *= factor;
    if (opt.max_step > 0 && std::abs(h) > opt.max_step) h = dir * opt.max_step;
  }
  return stats;
}

// Adaptive integration that lands exactly on each entry of `times`
// (monotone, either direction) and calls observer(index, t, y) there.
// times[0] is the initial time; the observer sees it first.
template <typename Scalar, typename Rhs, typename Observer>
OdeStats integrate_path(Rhs&& rhs, const RealVector<Scalar>& times,
                        ComplexVector<Scalar>& y, Observer&& observer,
                        const OdeOptions<Scalar>& opt = {}) {
  OdeStats total;
  if (times.size() == 0) return total;
  observer(Eigen::Index(0), times[0], y);
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    OdeStats s = integrate_adaptive(rhs, times[i - 1], times[i], y, opt);
    total.accepted += s.accepted;
    total.rejected += s.rejected;
    total.evals += s.evals;
    observer(i, times[i], y);
  }
  return total;
}

// Classical fixed-step fourth-order Runge-Kutta; deterministic step sequence
// for reproducible golden outputs.
template <typename Scalar, typename Rhs>
void integrate_fixed(Rhs&& rhs, Scalar t0, Scalar t1, std::int64_t nsteps,
                     ComplexVector<Scalar>& y) {
  if (nsteps <= 0) throw ConfigError("fixed-step integration needs nsteps > 0");
  const Scalar h = (t1 - t0) / Scalar(nsteps);
  const Eigen::Index n = y.size();
  ComplexVector<Scalar> k1(n), k2(n), k3(n), k4(n), ytmp(n);
  for (std::int64_t i = 0; i < nsteps; ++i) {
    const Scalar t = t0 + h * Scalar(i);
    rhs(t, y, k1);
    ytmp = y + (h / Scalar(2)) * k1;
    rhs(t + h / Scalar(2), ytmp, k2);
    ytmp = y + (h / Scalar(2)) * k2;
    rhs(t + h / Scalar(2), ytmp, k3);
    ytmp = y + h * k3;
    rhs(t + h, ytmp, k4);
    y += (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
  }
}

}  // namespace pap
