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

#include "pap/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "pap/adiabatic.hpp"
#include "pap/analysis.hpp"
#include "pap/bloch.hpp"
#include "pap/config.hpp"
#include "pap/dynamics.hpp"
#include "pap/errors.hpp"
#include "pap/fft.hpp"
#include "pap/io.hpp"
#include "pap/version.hpp"

namespace pap::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Flag values are written into the JSON tree before parsing, so the manifest
// records the values the run actually used.
void apply_flags(json& j, const Flags& f) {
  if (f.scale) j["drive"]["scale"] = *f.scale;
  if (f.alpha_omega) j["pulse"]["alpha_omega"] = *f.alpha_omega;
  if (f.sigma_omega) j["pulse"]["sigma_omega"] = *f.sigma_omega;
  if (f.t0) j["pulse"]["t0"] = *f.t0;
  if (f.frame) j["propagation"]["frame"] = *f.frame;
  if (f.fixed_step) j["propagation"]["fixed_step"] = *f.fixed_step;
  if (f.block) j["block_label"] = *f.block;
  if (f.workers) j["scan"]["workers"] = *f.workers;
  if (f.pulses) j["bloch"]["pulses"] = *f.pulses;
  if (f.sigma_probe) j["spectrogram"]["sigma_probe"] = *f.sigma_probe;
}

struct Run {
  Config cfg;
  fs::path dir;
  json manifest;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started;

  fs::path path(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
};

Run prepare(const Flags& f, const std::string& command) {
  Run run;
  run.started = std::chrono::steady_clock::now();
  const fs::path cfg_file(f.config_file);
  json j = load_json(cfg_file);
  apply_flags(j, f);
  run.cfg = parse_config(j, cfg_file.parent_path());
  const std::string name = f.out_name.empty()
                               ? command + "-" + cfg_file.stem().string()
                               : f.out_name;
  run.dir = output_root() / name;
  fs::create_directories(run.dir);
  run.manifest["command"] = command;
  run.manifest["version"] = kVersion;
  run.manifest["model_hash"] = hex64(model_hash(run.cfg.system));
  run.manifest["config"] = run.cfg.raw;
  return run;
}

void finish(Run& run) {
  run.manifest["outputs"] = run.outputs;
  // Fixed-step runs promise byte-identical outputs, so the one nondeterministic
  // field is omitted there.
  if (!run.cfg.prop.fixed_step) {
    const auto elapsed = std::chrono::steady_clock::now() - run.started;
    run.manifest["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }
  write_manifest(run.dir / "manifest.json", run.manifest);
  std::cout << "wrote " << run.dir.string() << "\n";
}

template <typename Fn>
int guarded(Fn&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericsError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

json metrics_json(const TransferMetrics<Real>& m) {
  json out;
  out["norm_defect"] = m.norm_defect;
  out["ground_final"] = m.ground_final;
  out["transferred"] = m.transferred;
  out["spectator_leak"] = m.spectator_leak;
  out["overlap"] = m.overlap;
  out["global_phase"] = m.global_phase;
  out["phase_errors"] =
      std::vector<Real>(m.phase_errors.data(),
                        m.phase_errors.data() + m.phase_errors.size());
  out["populations"] =
      std::vector<Real>(m.populations.data(),
                        m.populations.data() + m.populations.size());
  return out;
}

RealVector<Real> linspace(Real lo, Real hi, Eigen::Index n) {
  return RealVector<Real>::LinSpaced(n, lo, hi);
}

}  // namespace

int cmd_validate(const Flags& f) {
  return guarded([&] {
    const fs::path cfg_file(f.config_file);
    json j = load_json(cfg_file);
    apply_flags(j, f);
    const Config cfg = parse_config(j, cfg_file.parent_path());
    const auto& sys = cfg.system;
    std::cout << "model hash " << hex64(model_hash(sys)) << "\n";
    std::cout << "carrier " << format_real(sys.carrier) << " rad/fs\n";
    Eigen::Index targets = 0;
    for (const auto& lv : sys.levels) {
      std::cout << "level " << lv.label << ": resonance "
                << format_real(resonance(sys, level_index(sys, lv.label)))
                << " rad/fs, dipole " << format_real(lv.dipole) << ", "
                << (lv.kind == LevelKind::target ? "target" : "spectator")
                << "\n";
      if (lv.kind == LevelKind::target) ++targets;
    }
    std::cout << "levels: " << sys.size() << " (" << targets << " target)\n";
    if (!cfg.target.labels.empty()) {
      const auto d = target_spacings(sys, cfg.target);
      std::cout << "target spacings (rad/fs):";
      for (Eigen::Index i = 0; i < d.size(); ++i)
        std::cout << " " << format_real(d[i]);
      std::cout << "\n";
      if (cfg.target.labels.size() > 1) {
        std::cout << "half min spacing "
                  << format_real(half_min_spacing(sys, cfg.target))
                  << " rad/fs\n";
        std::cout << "beat period "
                  << format_real(beat_period(sys, cfg.target)) << " fs\n";
      }
    }
    if (cfg.chirp) {
      const auto train = train_from_config(cfg);
      std::cout << "sigma_t " << format_real(train.time.sigma_t)
                << " fs, alpha_t " << format_real(train.time.alpha_t)
                << " rad/fs^2, peak " << format_real(train.time.peak) << "\n";
      std::cout << "pulse area " << format_real(pulse_area(train))
                << " rad, modes " << train.modes.modes.size() << "\n";
      const auto grid = make_grid(train);
      std::cout << "grid " << grid.n << " samples, dt "
                << format_real(grid.dt) << " fs\n";
      if (windows_overlap(train))
        std::cout << "warning: adjacent spectral windows overlap; modes are "
                     "not individually resolved\n";
    }
    std::cout << "ok\n";
    return 0;
  });
}

int cmd_shape(const Flags& f) {
  return guarded([&] {
    Run run = prepare(f, "shape");
    const auto train = train_from_config(run.cfg);
    const auto grid = make_grid(train);
    const auto spec = build_spectrum(train, grid);
    const auto field = synthesize_time(spec);

    RealVector<Real> t(grid.n), re(grid.n), im(grid.n), mag(grid.n);
    Real num = 0, den = 0;  // analytic train vs spectral synthesis, L2
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      t[j] = grid.time(j);
      re[j] = field.env[j].real();
      im[j] = field.env[j].imag();
      mag[j] = std::abs(field.env[j]);
      const auto analytic = complex_envelope(train, t[j]);
      num += std::norm(field.env[j] - analytic);
      den += std::norm(analytic);
    }
    const Real residual = std::sqrt(num / den);
    write_csv_columns(run.path("field.csv"),
                      {"t_fs", "re_env", "im_env", "abs_env"},
                      {&t, &re, &im, &mag});

    RealVector<Real> w(grid.n), sre(grid.n), sim(grid.n);
    for (Eigen::Index k = 0; k < grid.n; ++k) {
      w[k] = grid.omega(k);
      sre[k] = spec.amp[k].real();
      sim[k] = spec.amp[k].imag();
    }
    write_csv_columns(run.path("spectrum.csv"),
                      {"omega_radfs", "re_amp", "im_amp"}, {&w, &sre, &sim});

    // Count only principal beats: the secondary lobes of an N-mode comb
    // stay below ~0.25 of the principal maximum.
    const auto features = train_features(field, 0.35);
    const Eigen::Index np = Eigen::Index(features.pulses.size());
    RealVector<Real> pc(np), pa(np), pe(np), pp(np);
    for (Eigen::Index i = 0; i < np; ++i) {
      pc[i] = features.pulses[std::size_t(i)].t_center;
      pa[i] = features.pulses[std::size_t(i)].amplitude;
      pe[i] = features.pulses[std::size_t(i)].energy;
      pp[i] = features.pulses[std::size_t(i)].phase;
    }
    write_csv_columns(run.path("features.csv"),
                      {"t_center_fs", "amplitude", "energy", "phase_rad"},
                      {&pc, &pa, &pe, &pp});

    // Envelope magnitude, downsampled for plotting.
    const Eigen::Index stride = std::max(Eigen::Index(1), grid.n / 2048);
    const Eigen::Index npts = grid.n / stride;
    RealVector<Real> td(npts), md(npts);
    for (Eigen::Index i = 0; i < npts; ++i) {
      td[i] = t[i * stride];
      md[i] = mag[i * stride];
    }
    write_svg_lines(run.path("envelope.svg"), "Field envelope", "t (fs)",
                    "|A(t)|", td, {{"abs envelope", md}});

    run.manifest["results"]["synthesis_residual"] = residual;
    run.manifest["results"]["pulse_area_rad"] = pulse_area(train);
    run.manifest["results"]["sigma_t_fs"] = train.time.sigma_t;
    run.manifest["results"]["alpha_t_radfs2"] = train.time.alpha_t;
    run.manifest["results"]["field_energy_time"] = field_energy(field);
    run.manifest["results"]["field_energy_spectral"] = field_energy(spec);
    run.manifest["results"]["sub_pulses"] = np;
    run.manifest["results"]["mean_spacing_fs"] = features.mean_spacing;
    if (np >= 3) {
      const auto fit = quadratic_phase_fit(features);
      run.manifest["results"]["phase_curvature_rad"] = fit.curvature;
      run.manifest["results"]["phase_fit_residual_rad"] = fit.max_residual;
    }
    finish(run);
    std::cout << "synthesis residual " << format_real(residual) << "\n";
    return 0;
  });
}

int cmd_propagate(const Flags& f) {
  return guarded([&] {
    Run run = prepare(f, "propagate");
    const auto& sys = run.cfg.system;
    const auto train = train_from_config(run.cfg);
    const auto traj = propagate(sys, train, run.cfg.prop);
    const auto rot = to_rotating(sys, traj);

    const Eigen::Index nt = rot.times.size();
    const Eigen::Index nl = sys.size();
    std::vector<RealVector<Real>> cols(std::size_t(nl) + 3);
    std::vector<std::string> headers;
    std::vector<const RealVector<Real>*> ptrs;
    cols[0] = rot.times;
    headers.push_back("t_fs");
    for (Eigen::Index k = 0; k <= nl; ++k) {
      RealVector<Real> p(nt);
      for (Eigen::Index j = 0; j < nt; ++j)
        p[j] = std::norm(rot.states(k, j));
      cols[std::size_t(k) + 1] = p;
      headers.push_back(k == 0 ? "pop_ground"
                               : "pop_" + std::to_string(
                                     sys.levels[std::size_t(k - 1)].label));
    }
    RealVector<Real> nrm(nt);
    for (Eigen::Index j = 0; j < nt; ++j)
      nrm[j] = rot.states.col(j).squaredNorm();
    cols[std::size_t(nl) + 2] = nrm;
    headers.push_back("norm");
    for (const auto& c : cols) ptrs.push_back(&c);
    write_csv_columns(run.path("trajectory.csv"), headers, ptrs);

    if (traj.failed) {
      // Keep the partial trajectory; mark the run and report failure.
      std::ofstream(run.dir / "failed") << "integration failed\n";
      run.outputs.push_back("failed");
      run.manifest["failed"] = true;
      finish(run);
      std::cerr << "numerical failure: integration stopped early\n";
      return 3;
    }
    run.manifest["failed"] = false;

    const auto series = adiabatic_series(sys, run.cfg.target, train, rot);
    write_csv_columns(
        run.path("adiabatic.csv"),
        {"t_fs", "lambda_plus", "lambda_minus", "delta", "omega_eff",
         "dark_population", "adiabaticity"},
        {&series.times, &series.lambda_plus, &series.lambda_minus,
         &series.delta, &series.omega_eff, &series.dark, &series.ratio});

    const auto idx = target_indices(sys, run.cfg.target);
    RealVector<Real> ground = cols[1];
    RealVector<Real> transferred = RealVector<Real>::Zero(nt);
    for (Eigen::Index k : idx)
      transferred += cols[std::size_t(k) + 1];
    RealVector<Real> leak(nt);
    for (Eigen::Index j = 0; j < nt; ++j)
      leak[j] = std::max(Real(0), nrm[j] - ground[j] - transferred[j]);
    write_svg_lines(run.path("populations.svg"), "Populations", "t (fs)",
                    "population", rot.times,
                    {{"ground", ground},
                     {"target manifold", transferred},
                     {"spectators", leak},
                     {"dark component", series.dark}});

    const auto m = metrics(sys, run.cfg.target, rot);
    write_manifest(run.path("metrics.json"), metrics_json(m));
    run.manifest["results"] = metrics_json(m);
    run.manifest["results"]["max_adiabaticity"] =
        max_adiabaticity(train, rot.times);
    run.manifest["results"]["frame"] =
        traj.frame == Frame::rotating ? "rotating"
        : traj.frame == Frame::modal ? "modal"
                                     : "bare";
    run.manifest["results"]["carrier_radfs"] = traj.carrier;
    run.manifest["ode"] = {{"accepted", traj.stats.accepted},
                           {"rejected", traj.stats.rejected},
                           {"evals", traj.stats.evals}};
    finish(run);
    std::cout << "transferred " << format_real(m.transferred) << ", overlap "
              << format_real(m.overlap) << ", ground "
              << format_real(m.ground_final) << "\n";
    return 0;
  });
}

int cmd_spectrogram(const Flags& f) {
  return guarded([&] {
    Run run = prepare(f, "spectrogram");
    if (!run.cfg.spectrogram)
      throw ConfigError("spectrogram: missing section");
    const auto& sc = *run.cfg.spectrogram;
    const auto train = train_from_config(run.cfg);
    const auto grid = make_grid(train);
    const auto field = synthesize_time(build_spectrum(train, grid));

    // Default probe window: the train in time, the comb plus a margin in
    // frequency.
    Real wspan = 0;
    for (const auto& mo : train.modes.modes)
      wspan = std::max(wspan, std::abs(mo.omega_res - train.modes.omega0));
    wspan += 4 * train.chirp.sigma_omega;
    const Real t_lo = sc.t_min ? *sc.t_min
                               : train.chirp.t0 - 3 * train.time.sigma_t;
    const Real t_hi = sc.t_max ? *sc.t_max
                               : train.chirp.t0 + 3 * train.time.sigma_t;
    const Real w_lo = sc.w_min ? *sc.w_min : train.modes.omega0 - wspan;
    const Real w_hi = sc.w_max ? *sc.w_max : train.modes.omega0 + wspan;

    SpectrogramSpec<Real> spec;
    spec.sigma_probe = sc.sigma_probe;
    spec.probe_times = linspace(t_lo, t_hi, sc.n_times);
    spec.probe_omegas = linspace(w_lo, w_hi, sc.n_omegas);
    const auto sg = husimi(field, spec);

    RealMatrix<Real> mag(sg.omegas.size(), sg.times.size());
    RealMatrix<Real> phase(sg.omegas.size(), sg.times.size());
    for (Eigen::Index r = 0; r < sg.omegas.size(); ++r)
      for (Eigen::Index c = 0; c < sg.times.size(); ++c) {
        mag(r, c) = std::abs(sg.q(r, c));
        phase(r, c) = std::arg(sg.q(r, c));
      }
    write_csv_matrix(run.path("husimi_abs.csv"), "omega_by_t", sg.omegas,
                     sg.times, mag);
    write_csv_matrix(run.path("husimi_phase.csv"), "omega_by_t", sg.omegas,
                     sg.times, phase);
    write_svg_heatmap(run.path("husimi_abs.svg"), "Husimi magnitude",
                      "t (fs)", "omega (rad/fs)", "|Q|", sg.omegas, sg.times,
                      mag, false);
    write_svg_heatmap(run.path("husimi_phase.svg"), "Husimi phase", "t (fs)",
                      "omega (rad/fs)", "arg Q (rad)", sg.omegas, sg.times,
                      phase, true);

    const auto stripes = stripe_crossings(sg, train.chirp.t0);
    run.manifest["results"]["stripes_at_center"] = stripes;
    run.manifest["results"]["stripe_count"] = stripes.size();
    json res = json::array();
    for (const auto& mo : train.modes.modes) res.push_back(mo.omega_res);
    run.manifest["results"]["mode_resonances"] = res;
    finish(run);
    std::cout << "stripes at train center: " << stripes.size() << "\n";
    return 0;
  });
}

int cmd_scan(const Flags& f) {
  return guarded([&] {
    Run run = prepare(f, "scan");
    if (!run.cfg.scan) throw ConfigError("scan: missing section");
    if (!run.cfg.chirp) throw ConfigError("pulse: missing");
    const auto& sc = *run.cfg.scan;
    const auto& sys = run.cfg.system;

    if (sc.kind == ScanConfig::Kind::grid) {
      const auto res = scan_2d(sys, run.cfg.target, *run.cfg.chirp, sc.alphas,
                               sc.scales, run.cfg.prop, sc.workers);
      write_csv_matrix(run.path("transferred.csv"), "alpha_by_scale",
                       res.alphas, res.scales, res.transferred);
      write_csv_matrix(run.path("overlap.csv"), "alpha_by_scale", res.alphas,
                       res.scales, res.overlap);
      write_csv_matrix(run.path("ground.csv"), "alpha_by_scale", res.alphas,
                       res.scales, res.ground);
      write_csv_matrix(run.path("leak.csv"), "alpha_by_scale", res.alphas,
                       res.scales, res.leak);
      write_svg_heatmap(run.path("transferred.svg"), "Transferred population",
                        "coupling scale (rad/fs)", "alpha_omega (fs^2)",
                        "transferred", res.alphas, res.scales,
                        res.transferred, false);
      write_svg_heatmap(run.path("overlap.svg"), "Target overlap",
                        "coupling scale (rad/fs)", "alpha_omega (fs^2)",
                        "overlap", res.alphas, res.scales, res.overlap,
                        false);
      Eigen::Index br = 0, bc = 0;
      res.transferred.maxCoeff(&br, &bc);
      run.manifest["results"]["max_transferred"] = res.transferred(br, bc);
      run.manifest["results"]["argmax_alpha_omega"] = res.alphas[br];
      run.manifest["results"]["argmax_scale"] = res.scales[bc];
      run.manifest["results"]["workers"] = sc.workers;
      finish(run);
      std::cout << "max transferred "
                << format_real(res.transferred(br, bc)) << " at alpha_omega "
                << format_real(res.alphas[br]) << ", scale "
                << format_real(res.scales[bc]) << "\n";
      return 0;
    }

    ChirpParams<Real> base = *run.cfg.chirp;
    base.alpha_omega = sc.alpha_omega;
    const auto res = scan_sigma(sys, run.cfg.target, base, sc.scale,
                                sc.sigmas, run.cfg.prop);
    write_csv_columns(
        run.path("sigma_scan.csv"),
        {"sigma_omega_radfs", "transferred", "overlap", "ground", "leak"},
        {&res.sigmas, &res.transferred, &res.overlap, &res.ground,
         &res.leak});
    write_svg_lines(run.path("sigma_scan.svg"), "Selectivity vs window width",
                    "sigma_omega (rad/fs)", "population", res.sigmas,
                    {{"transferred", res.transferred},
                     {"overlap", res.overlap},
                     {"ground", res.ground}});
    run.manifest["results"]["half_min_spacing"] = res.half_spacing;
    finish(run);
    std::cout << "half min spacing " << format_real(res.half_spacing)
              << " rad/fs\n";
    return 0;
  });
}

int cmd_bloch(const Flags& f) {
  return guarded([&] {
    Run run = prepare(f, "bloch");
    const auto& sys = run.cfg.system;
    const auto train = train_from_config(run.cfg);
    const Eigen::Index n_pulses =
        run.cfg.bloch ? run.cfg.bloch->pulses : Eigen::Index(20);
    const Real beat = beat_period(sys, run.cfg.target);
    const auto schedule = schedule_from_field(train, beat, n_pulses);
    const auto path = run_schedule(schedule);

    const Eigen::Index np = Eigen::Index(schedule.pulses.size());
    RealVector<Real> idx(np), ap(np), af(np);
    for (Eigen::Index l = 0; l < np; ++l) {
      idx[l] = Real(l);
      ap[l] = schedule.pulses[std::size_t(l)].alpha_p;
      af[l] = schedule.pulses[std::size_t(l)].alpha_f;
    }
    write_csv_columns(run.path("schedule.csv"),
                      {"pulse", "alpha_p_rad", "alpha_f_rad"},
                      {&idx, &ap, &af});

    RealVector<Real> step(np + 1), bx(np + 1), by(np + 1), bz(np + 1);
    for (Eigen::Index l = 0; l <= np; ++l) {
      step[l] = Real(l);
      bx[l] = path(0, l);
      by[l] = path(1, l);
      bz[l] = path(2, l);
    }
    write_csv_columns(run.path("bloch_path.csv"), {"step", "x", "y", "z"},
                      {&step, &bx, &by, &bz});
    write_svg_lines(run.path("bloch_path.svg"), "Two-level Bloch vector",
                    "pulse index", "component", step,
                    {{"x", bx}, {"y", by}, {"z", bz}});

    const auto net = axis_angle(net_rotation(schedule));
    run.manifest["results"]["final_z"] = bz[np];
    run.manifest["results"]["piecewise_regime"] = piecewise_regime(schedule);
    run.manifest["results"]["adiabaticity_piecewise"] =
        adiabaticity_piecewise(schedule);
    run.manifest["results"]["beat_period_fs"] = beat;
    run.manifest["results"]["pulses"] = np;
    run.manifest["results"]["net_angle_rad"] = net.angle;
    run.manifest["results"]["net_axis"] = {net.axis[0], net.axis[1],
                                           net.axis[2]};
    finish(run);
    std::cout << "final z " << format_real(bz[np]) << "\n";
    return 0;
  });
}

}  // namespace pap::cli
