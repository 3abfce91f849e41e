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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pap/analysis.hpp"
#include "pap/config.hpp"
#include "pap/fft.hpp"
#include "pap/units.hpp"

namespace {

using pap::FourierGrid;
using pap::TemporalField;

// A bare grid for hand-built envelopes.
FourierGrid<double> toy_grid(Eigen::Index n, double dt, double t0,
                             double omega0) {
  FourierGrid<double> g;
  g.n = n;
  g.dt = dt;
  g.dw = pap::kTwoPi / (double(n) * dt);
  g.t0 = t0;
  g.omega0 = omega0;
  return g;
}

pap::cli::Config comb_config() {
  const auto j = pap::cli::load_json(std::string(PAP_CONFIG_DIR) +
                                     "/run_comb.json");
  return pap::cli::parse_config(j, PAP_CONFIG_DIR);
}

}  // namespace

TEST_CASE("wrap_angle maps onto (-pi, pi]") {
  CHECK(pap::wrap_angle(0.3) == doctest::Approx(0.3));
  CHECK(pap::wrap_angle(pap::kPi) == doctest::Approx(pap::kPi));
  CHECK(pap::wrap_angle(-pap::kPi) == doctest::Approx(pap::kPi));
  CHECK(pap::wrap_angle(1.5 * pap::kPi) == doctest::Approx(-0.5 * pap::kPi));
  CHECK(pap::wrap_angle(-7.0) == doctest::Approx(-7.0 + pap::kTwoPi));
  CHECK(pap::wrap_angle(25.0) ==
        doctest::Approx(25.0 - 4 * pap::kTwoPi).epsilon(1e-12));
}

TEST_CASE("train_features finds lobes, refines peaks, splits energy") {
  // Three Gaussian lobes with off-grid centers and per-lobe phases. The
  // runt fourth lobe at 3% of the maximum must be rejected at the default
  // 5% threshold.
  const auto g = toy_grid(4096, 0.5, 0.0, 2.0);
  const double centers[] = {-400.25, 0.37, 400.11, 800.0};
  const double amps[] = {0.6, 1.0, 0.8, 0.03};
  const double phases[] = {0.4, -1.2, 2.9, 0.0};
  const double w = 30.0;
  TemporalField<double> f;
  f.grid = g;
  f.env = pap::ComplexVector<double>::Zero(g.n);
  for (Eigen::Index j = 0; j < g.n; ++j) {
    const double t = g.time(j);
    for (int l = 0; l < 4; ++l) {
      const double d = t - centers[l];
      f.env[j] += std::polar(amps[l] * std::exp(-d * d / (2 * w * w)),
                             phases[l]);
    }
  }
  const auto feats = pap::train_features(f);
  REQUIRE(feats.pulses.size() == 3);
  for (int l = 0; l < 3; ++l) {
    CHECK(feats.pulses[l].t_center ==
          doctest::Approx(centers[l]).epsilon(1e-4));
    CHECK(feats.pulses[l].amplitude ==
          doctest::Approx(amps[l]).epsilon(1e-3));
    CHECK(feats.pulses[l].phase ==
          doctest::Approx(phases[l]).epsilon(1e-2));
  }
  CHECK(feats.mean_spacing ==
        doctest::Approx((centers[2] - centers[0]) / 2).epsilon(1e-5));
  // Segment energies cover the whole grid and sum to the field energy.
  double esum = 0;
  for (const auto& p : feats.pulses) esum += p.energy;
  CHECK(esum == doctest::Approx(pap::field_energy(f)).epsilon(1e-12));
  // Isolated identical lobes split energy in proportion to amp^2.
  CHECK(feats.pulses[0].energy / feats.pulses[1].energy ==
        doctest::Approx(0.36).epsilon(1e-3));
}

TEST_CASE("quadratic_phase_fit recovers a wrapped parabola exactly") {
  const double c1 = 0.9, c2 = 0.074;
  pap::TrainFeatures<double> feats;
  const int np = 11, lc = 5;
  for (int l = 0; l < np; ++l) {
    pap::SubPulse<double> p;
    p.t_center = 100.0 * l;
    p.amplitude = 1.0 - 0.05 * std::abs(l - lc);  // strongest at lc
    const double x = l - lc;
    p.phase = pap::wrap_angle(0.3 + c1 * x + c2 * x * x);
    feats.pulses.push_back(p);
  }
  const auto fit = pap::quadratic_phase_fit(feats);
  CHECK(fit.curvature == doctest::Approx(2 * c2).epsilon(1e-10));
  CHECK(pap::wrap_angle(fit.c0 - 0.3) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pap::wrap_angle(fit.c1 - c1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.max_residual < 1e-9);
}

TEST_CASE("phase fit survives the alternating branch cut") {
  // A comb of evenly spaced modes flips the envelope phase by ~pi from one
  // beat to the next, parking every increment on the wrap boundary. The
  // rebuilt chain must stay on one branch through the center; a seam there
  // once bent the curvature from +0.30 to -0.33 with O(1) residuals.
  const double c2 = 0.148;
  pap::TrainFeatures<double> feats;
  const int np = 13, lc = 6;
  for (int l = 0; l < np; ++l) {
    pap::SubPulse<double> p;
    p.t_center = 244.0 * l;
    p.amplitude = 1.0 - 0.04 * std::abs(l - lc);
    const double x = l - lc;
    p.phase = pap::wrap_angle(pap::kPi * x + c2 * x * x - 0.7);
    feats.pulses.push_back(p);
  }
  const auto fit = pap::quadratic_phase_fit(feats);
  CHECK(fit.curvature == doctest::Approx(2 * c2).epsilon(1e-10));
  CHECK(fit.max_residual < 1e-9);
  CHECK(pap::wrap_angle(fit.c0 + 0.7) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("phase fit rejects trains with fewer than three pulses") {
  pap::TrainFeatures<double> feats;
  feats.pulses.resize(2);
  CHECK_THROWS_AS(pap::quadratic_phase_fit(feats), pap::ConfigError);
}

TEST_CASE("harmonic comb produces the analytic beat train") {
  // End-to-end frozen regression: six windows on an evenly spaced comb
  // synthesize a beat train whose spacing is the vibrational period and
  // whose sub-pulse phases bend with curvature alpha_t * T_vib^2.
  auto cfg = comb_config();
  const auto train = pap::cli::train_from_config(cfg);
  const auto grid = pap::make_grid(train);
  const auto field = pap::synthesize_time(pap::build_spectrum(train, grid));
  const auto feats = pap::train_features(field, 0.35);
  REQUIRE(feats.pulses.size() == 19);
  const double t_vib = pap::kTwoPi / 0.0257;
  CHECK(std::abs(feats.mean_spacing - t_vib) / t_vib < 0.01);
  const auto fit = pap::quadratic_phase_fit(feats);
  const double curv_pred = train.time.alpha_t * t_vib * t_vib;
  CHECK(std::abs(fit.curvature - curv_pred) / curv_pred < 0.05);
  CHECK(fit.max_residual < 1e-4);
  // Frozen values pin the whole pipeline bit-for-bit drift.
  CHECK(feats.mean_spacing ==
        doctest::Approx(244.42741583612244).epsilon(1e-9));
  CHECK(fit.curvature ==
        doctest::Approx(0.29650196670982976).epsilon(1e-9));
  // The central beat is the strongest and carries the largest energy.
  Eigen::Index imax = 0;
  for (Eigen::Index i = 1; i < 19; ++i)
    if (feats.pulses[std::size_t(i)].amplitude >
        feats.pulses[std::size_t(imax)].amplitude)
      imax = i;
  CHECK(std::abs(feats.pulses[std::size_t(imax)].t_center) <
        0.6 * feats.mean_spacing);
}

TEST_CASE("husimi peaks at the pulse center and carrier") {
  // Unchirped single window: the envelope is |A(t)| = 2 peak e^{-t^2/2st^2}
  // (the coupling convention keeps the RWA half inside the Rabi rate), so
  //   |Q(tp=0, w0+D)| = peak sqrt(pi/a) exp(-D^2/(4a)),
  //   a = 1/(2 sigma_t^2) + 1/(2 sp^2).
  pap::ChirpParams<double> cp;
  cp.sigma_omega = 0.01;
  const auto train = pap::single_chirp_pulse(2.0, 1.0, cp, 1.0);
  const auto grid = pap::make_grid(train);
  const auto field = pap::synthesize_time(pap::build_spectrum(train, grid));
  pap::SpectrogramSpec<double> spec;
  spec.sigma_probe = 60.0;
  spec.probe_times = pap::RealVector<double>::LinSpaced(11, -200, 200);
  spec.probe_omegas = pap::RealVector<double>::LinSpaced(41, 1.96, 2.04);
  const auto sg = pap::husimi(field, spec);
  Eigen::Index bi = 0, bj = 0;
  double best = -1;
  for (Eigen::Index i = 0; i < sg.omegas.size(); ++i)
    for (Eigen::Index j = 0; j < sg.times.size(); ++j)
      if (std::abs(sg.q(i, j)) > best) {
        best = std::abs(sg.q(i, j));
        bi = i;
        bj = j;
      }
  CHECK(sg.times[bj] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sg.omegas[bi] == doctest::Approx(2.0).epsilon(1e-12));
  const double st = train.time.sigma_t, sp = 60.0;
  const double a = 1 / (2 * st * st) + 1 / (2 * sp * sp);
  const double q00 = train.time.peak * std::sqrt(pap::kPi / a);
  CHECK(best == doctest::Approx(q00).epsilon(1e-3));
  // Phase convention: on resonance at the center the overlap is real
  // positive, and the frequency profile is the Gaussian transform.
  CHECK(std::abs(std::arg(sg.q(bi, bj))) < 1e-6);
  const double d = sg.omegas[30] - 2.0;
  CHECK(std::abs(sg.q(30, bj)) ==
        doctest::Approx(q00 * std::exp(-d * d / (4 * a))).epsilon(1e-3));
}

TEST_CASE("husimi ridge drifts with the temporal chirp") {
  pap::ChirpParams<double> cp;
  cp.sigma_omega = 0.01;
  cp.alpha_omega = 5e4;
  const auto train = pap::single_chirp_pulse(2.0, 1.0, cp, 1.0);
  const auto grid = pap::make_grid(train);
  const auto field = pap::synthesize_time(pap::build_spectrum(train, grid));
  pap::SpectrogramSpec<double> spec;
  spec.sigma_probe = 120.0;
  spec.probe_times = pap::RealVector<double>::Zero(3);
  spec.probe_times << -1200.0, 0.0, 1200.0;
  spec.probe_omegas = pap::RealVector<double>::LinSpaced(241, 1.94, 2.06);
  const auto sg = pap::husimi(field, spec);
  const auto early = pap::stripe_crossings(sg, -1200.0);
  const auto late = pap::stripe_crossings(sg, 1200.0);
  REQUIRE(early.size() == 1);
  REQUIRE(late.size() == 1);
  const double slope = (late[0] - early[0]) / 2400.0;
  // Gaussian-probe ridge: d w_ridge / d tp = alpha_t st^2/(st^2 + sp^2).
  const double st = train.time.sigma_t, sp = 120.0;
  const double pred = train.time.alpha_t * st * st / (st * st + sp * sp);
  CHECK(slope == doctest::Approx(pred).epsilon(0.03));
  CHECK(early[0] < 2.0);
  CHECK(late[0] > 2.0);
}

TEST_CASE("stripe_crossings reads local maxima of one column") {
  pap::Spectrogram<double> sg;
  sg.times = pap::RealVector<double>::LinSpaced(3, -10, 10);
  sg.omegas = pap::RealVector<double>::LinSpaced(7, 1.0, 7.0);
  sg.q = pap::ComplexMatrix<double>::Zero(7, 3);
  // Column nearest t=1 is the center one.
  sg.q.col(1) << 0.1, 1.0, 0.1, 0.8, 0.05, 0.04, 0.02;
  const auto hits = pap::stripe_crossings(sg, 1.0);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0] == doctest::Approx(2.0));
  CHECK(hits[1] == doctest::Approx(4.0));
  pap::Spectrogram<double> tiny;
  tiny.times = pap::RealVector<double>::Zero(1);
  tiny.omegas = pap::RealVector<double>::Zero(2);
  CHECK_THROWS_AS(pap::stripe_crossings(tiny, 0.0), pap::ConfigError);
}

TEST_CASE("scan_2d matches a direct run and ignores worker count") {
  auto cfg = comb_config();
  pap::PropagationSpec<double> prop = cfg.prop;
  prop.frame = pap::Frame::rotating;
  prop.samples = 2;
  prop.ode.rtol = 1e-8;
  prop.ode.atol = 1e-10;
  pap::RealVector<double> alphas(3);
  alphas << -1e5, 0.0, 2e5;
  pap::RealVector<double> scales(2);
  scales << 0.3, 0.56;
  const auto r1 = pap::scan_2d(cfg.system, cfg.target, *cfg.chirp, alphas,
                               scales, prop, 1);
  const auto r3 = pap::scan_2d(cfg.system, cfg.target, *cfg.chirp, alphas,
                               scales, prop, 3);
  CHECK((r1.transferred - r3.transferred).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.overlap - r3.overlap).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.ground - r3.ground).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.leak - r3.leak).cwiseAbs().maxCoeff() == 0.0);
  // One cell equals the direct pipeline bit for bit.
  pap::ChirpParams<double> cp = *cfg.chirp;
  cp.alpha_omega = alphas[2];
  const auto train =
      pap::pulse_train(pap::derive_modes(cfg.system, cfg.target, 0.56), cp);
  const auto m = pap::metrics(cfg.system, cfg.target,
                              pap::propagate(cfg.system, train, prop));
  CHECK(r1.transferred(2, 1) == m.transferred);
  CHECK(r1.overlap(2, 1) == m.overlap);
  // On the chirped rows the passage strengthens with the drive; the
  // alpha = 0 row Rabi-oscillates instead, so it is left out.
  CHECK(r1.transferred(0, 1) > r1.transferred(0, 0));
  CHECK(r1.transferred(2, 1) > r1.transferred(2, 0));
  pap::RealVector<double> empty;
  CHECK_THROWS_AS(pap::scan_2d(cfg.system, cfg.target, *cfg.chirp, empty,
                               scales, prop, 1),
                  pap::ConfigError);
  CHECK_THROWS_AS(pap::scan_2d(cfg.system, cfg.target, *cfg.chirp, alphas,
                               scales, prop, 0),
                  pap::ConfigError);
}

TEST_CASE("scan_sigma tabulates widths against the selectivity scale") {
  const auto j = pap::cli::load_json(std::string(PAP_CONFIG_DIR) +
                                     "/run_demo.json");
  const auto cfg = pap::cli::parse_config(j, PAP_CONFIG_DIR);
  pap::PropagationSpec<double> prop = cfg.prop;
  prop.frame = pap::Frame::modal;
  prop.samples = 2;
  prop.ode.rtol = 1e-8;
  prop.ode.atol = 1e-10;
  pap::RealVector<double> sigmas(2);
  const double hs = pap::half_min_spacing(cfg.system, cfg.target);
  sigmas << 0.3 * hs, 1.3 * hs;
  const auto res = pap::scan_sigma(cfg.system, cfg.target, *cfg.chirp, 0.56,
                                   sigmas, prop);
  CHECK(res.half_spacing == doctest::Approx(hs));
  CHECK(hs == doctest::Approx(0.01261).epsilon(1e-3));
  REQUIRE(res.transferred.size() == 2);
  // A window wider than the level spacing destroys the selective overlap.
  CHECK(res.overlap[0] > 0.9);
  CHECK(res.overlap[1] < res.overlap[0] - 0.1);
  CHECK(res.transferred.maxCoeff() <= 1.0 + 1e-9);
  CHECK(res.ground.minCoeff() >= -1e-12);
}

TEST_CASE("window_stats reports extremes of an index block") {
  pap::RealMatrix<double> m(3, 4);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
  const auto ws = pap::window_stats(m, 1, 2, 1, 2);
  CHECK(ws.min == 6.0);
  CHECK(ws.max == 11.0);
  CHECK(ws.mean == doctest::Approx(8.5));
  CHECK_THROWS_AS(pap::window_stats(m, 1, 3, 0, 0), pap::ConfigError);
  CHECK_THROWS_AS(pap::window_stats(m, 2, 1, 0, 0), pap::ConfigError);
}
