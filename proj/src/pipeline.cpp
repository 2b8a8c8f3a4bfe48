#include "ringsq/pipeline.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "ringsq/io.hpp"
#include "ringsq/render.hpp"

namespace ringsq {

namespace {

constexpr const char* kVersion = "0.1.0";

double omega_of(const BandConfig& b) { return 2.0 * kPi * b.frequency_THz * 1e12; }

SchmidtWeighting weighting(const RunConfig& cfg) {
  return cfg.schmidt_weighting == "amplitude" ? SchmidtWeighting::Amplitude
                                               : SchmidtWeighting::PhotonNumber;
}

}  // namespace

ResonanceSpec resonance_from(Band band, const BandConfig& b) {
  const double omega = omega_of(b);
  const double q_load = b.q_load ? *b.q_load : omega * (*b.dwell_time_ps * 1e-12) / 2.0;
  return build_resonance(band, omega, b.group_velocity, b.q_int, q_load);
}

double zeta_tail_fraction(const CouplingTensor& coupling, const CVector& beta, double t0,
                          double t1, double h) {
  const long n = std::max<long>(20, static_cast<long>(std::ceil((t1 - t0) / h)));
  const double dt = (t1 - t0) / static_cast<double>(n);
  const double xx = coupling.f.squaredNorm();  // ‖x(t)‖² is time independent
  const long tail_start = static_cast<long>(std::floor(0.95 * static_cast<double>(n)));
  double total = 0.0, tail = 0.0, prev = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const double z = std::abs(Complex(coupling.p(t).transpose() * beta)) * xx;
    if (i > 0) {
      const double piece = 0.5 * (z + prev) * dt;
      total += piece;
      if (i > tail_start) tail += piece;
    }
    prev = z;
  }
  return total > 0.0 ? tail / total : 0.0;
}

Model build_model(const RunConfig& cfg, double pulse_energy_pJ) {
  Model m;
  m.P = resonance_from(Band::P, cfg.P);
  m.S = resonance_from(Band::S, cfg.S);
  m.C = resonance_from(Band::C, cfg.C);
  m.ring.radius = cfg.radius_um * 1e-6;
  m.ring.gamma_nl = cfg.gamma_nl;
  m.pump.cw_power = cfg.cw_power_mW * 1e-3;
  m.pump.pulse_energy = pulse_energy_pJ * 1e-12;
  m.pump.pulse_duration = cfg.pulse_duration_ns * 1e-9;
  m.pump.omega = m.P.omega;

  m.grid_s = KGrid::centered(cfg.n_signal, cfg.signal_span * m.S.gamma_bar / m.S.v);
  m.grid_p = KGrid::centered(cfg.n_pump, cfg.pump_span / (m.P.v * m.pump.pulse_duration));
  m.coupling = coupling_tensor(m.P, m.S, m.C, m.grid_s, m.grid_p, m.pump, m.ring);
  m.beta_in = initial_pump(m.pump, m.grid_p, m.P.v);

  const double unit = m.coupling.time_unit;
  m.tau = m.pump.pulse_duration / unit;
  m.t_start = -cfg.window_before * m.tau;
  m.t_end = cfg.window_after * m.tau + cfg.ringdown;
  m.step = std::min({m.tau, 1.0, m.S.gamma_bar / m.P.gamma_bar}) / cfg.step_divisor;

  const double coarse = std::max(m.step, (m.t_end - m.t_start) / 20000.0);
  while (zeta_tail_fraction(m.coupling, m.beta_in, m.t_start, m.t_end, coarse) >= 1e-4) {
    if (!cfg.auto_extend || m.window_extensions >= 8)
      throw Error("gaussian_dynamics", "integration window too short: zeta has not decayed at its end");
    m.t_end += 0.25 * (m.t_end - m.t_start);
    ++m.window_extensions;
  }

  const double window = m.t_end - m.t_start;
  for (auto [name, period] : {std::pair{"pump", m.grid_p.period(m.P.v) / unit},
                              std::pair{"signal", m.grid_s.period(m.S.v) / unit}}) {
    if (period < 1.5 * window) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "%s grid too coarse: its time period %.3g is below 1.5x the window %.3g "
                    "(dwell-time units)",
                    name, period, window);
      throw Error("ring_model", buf);
    }
  }
  return m;
}

RunOptions options_for(const RunConfig& cfg) {
  RunOptions o;
  o.full = cfg.mode == "full" || cfg.mode == "both";
  o.first = cfg.mode == "first" || cfg.mode == "both";
  o.verify_step_halving = cfg.verify_step_halving;
  return o;
}

SolutionObservables observe(const Model& m, const RunConfig& cfg, const CMatrix& V,
                            const CMatrix& W, bool from_first_order) {
  SolutionObservables o;
  o.decomp = from_first_order ? decompose_J(W) : decompose(V, W);
  o.J = o.decomp.J;
  const Index n = m.grid_s.n;
  o.photons = photon_number(W);
  o.photons_actual = channel_photon_number(W, Channel::Actual, n);
  o.photons_phantom = channel_photon_number(W, Channel::Phantom, n);
  o.schmidt = schmidt_number(o.decomp.spectrum.lambda, weighting(cfg));

  const double dw = m.S.v * m.grid_s.dk * m.coupling.time_unit;
  const MomentMatrices mm =
      moment_matrices(V, W, Channel::Actual, n, m.coupling.w_signal.head(n), dw);
  const RVector times = uniform_times(0.0, cfg.g2_t_max, cfg.g2_points);
  const double flux_photons = cfg.flux_channel == "total" ? o.photons : o.photons_actual;
  o.g2 = g2(mm, times, flux_photons, m.tau);
  return o;
}

PointResult run_point(const RunConfig& cfg, double pulse_energy_pJ, const RunOptions& opt) {
  PointResult r;
  r.U_P_pJ = pulse_energy_pJ;
  r.model = build_model(cfg, pulse_energy_pJ);
  const Model& m = r.model;

  if (opt.full) {
    EvolveOptions eo;
    eo.t_start = m.t_start;
    eo.t_end = m.t_end;
    eo.step = m.step * opt.step_scale;
    eo.sample_stride = cfg.sample_stride;
    eo.time_unit = m.coupling.time_unit;
    eo.abort_on_violation = opt.abort_on_violation;
    r.full = evolve(m.coupling, m.beta_in, eo);
    const GaussianState& s = r.full->final;
    r.q_residual = r.full->max_q_drift;
    r.obs_full = observe(m, cfg, s.V, s.W, false);
    if (opt.verify_step_halving) {
      eo.step *= 0.5;
      eo.track_theta_a = false;
      eo.sample_stride = std::max(1, cfg.sample_stride * 2);
      const EvolveResult half = evolve(m.coupling, m.beta_in, eo);
      const double n = photon_number(s.W);
      r.step_halving_rel = n > 0.0 ? std::abs(photon_number(half.final.W) - n) / n : 0.0;
    }
  }
  if (opt.first) {
    r.W1 = first_order(m.coupling, m.beta_in, m.t_start, m.t_end).W;
    const Index d = r.W1->rows();
    r.obs_first = observe(m, cfg, CMatrix::Identity(d, d), *r.W1, true);
    r.n_first_ket = r.obs_first->decomp.spectrum.lambda.array().sinh().square().sum();
  }
  return r;
}

FockConfig fock_config(const RunConfig& cfg) {
  FockConfig f;
  f.m_a = cfg.fock.signal_modes;
  f.m_b = cfg.fock.pump_modes;
  f.cutoff.assign(static_cast<std::size_t>(f.m_a), cfg.fock.signal_cutoff);
  f.cutoff.insert(f.cutoff.end(), static_cast<std::size_t>(f.m_b), cfg.fock.pump_cutoff);
  for (int l = 0; l < f.m_b; ++l)
    f.lambda.push_back(CMatrix::Constant(f.m_a, f.m_a, Complex(cfg.fock.coupling, 0.0)));
  f.beta0 = CVector::Constant(f.m_b, Complex(cfg.fock.pump_amplitude, 0.0));
  f.t_end = cfg.fock.duration;
  return f;
}

nlohmann::json fock_report_json(const GaussianityReport& r) {
  nlohmann::json j;
  j["dim"] = r.dim;
  j["depletion"] = r.depletion;
  j["n_a_exact"] = r.n_a_exact;
  j["n_a_gaussian"] = r.n_a_gaussian;
  j["fidelity"] = r.fidelity ? nlohmann::json(*r.fidelity) : nlohmann::json(nullptr);
  j["Q_drift"] = r.Q_drift;
  return j;
}

SweepRecord to_record(const PointResult& p, const RunConfig& cfg) {
  (void)cfg;
  SweepRecord s;
  s.U_P_pJ = p.U_P_pJ;
  if (p.obs_full) {
    s.n_full = p.obs_full->photons;
    s.K_full = p.obs_full->schmidt;
    s.Q_residual = p.q_residual;
  }
  if (p.obs_first) {
    s.n_first = p.obs_first->photons;
    s.K_first = p.obs_first->schmidt;
    s.n_first_ket = p.n_first_ket;
  }
  return s;
}

std::string point_dir_name(double pulse_energy_pJ) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "U_P_%gpJ", pulse_energy_pJ);
  return buf;
}

namespace {

RMatrix abs_block(const CMatrix& J, Index n) { return J.topLeftCorner(n, n).cwiseAbs(); }

nlohmann::json spectrum_json(const SqueezeDecomp& d, int count) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < std::min<Index>(count, d.spectrum.lambda.size()); ++i)
    a.push_back(d.spectrum.lambda(i));
  return a;
}

nlohmann::json solution_json(const SolutionObservables& o) {
  nlohmann::json j;
  j["photons"] = o.photons;
  j["photons_actual"] = o.photons_actual;
  j["photons_phantom"] = o.photons_phantom;
  j["schmidt_photon_number"] = o.decomp.schmidt;
  j["schmidt_amplitude"] = o.decomp.schmidt_amplitude;
  j["takagi_values_top10"] = spectrum_json(o.decomp, 10);
  j["J_symmetry_residual"] = o.decomp.symmetry_residual;
  const Peak pk = peak(o.g2.normalized(), o.g2.times);
  j["g2_peak"] = {{"t1_dwell", pk.t1}, {"t2_dwell", pk.t2}, {"value", pk.value}};
  j["flux_per_dwell"] = o.g2.flux;
  return j;
}

nlohmann::json record_json(const SweepRecord& r, bool full, bool first) {
  auto val = [](bool ok, double v) { return ok ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["U_P_pJ"] = r.U_P_pJ;
  j["n_full"] = val(full, r.n_full);
  j["n_first"] = val(first, r.n_first);
  j["gap_dB"] = val(full && first, r.gap_dB);
  j["K_full"] = val(full, r.K_full);
  j["K_first"] = val(first, r.K_first);
  j["Q_residual"] = val(full, r.Q_residual);
  j["n_first_ket"] = val(first, r.n_first_ket);
  j["gap_dB_ket"] = val(full && first, r.gap_dB_ket);
  return j;
}

}  // namespace

std::vector<std::string> write_point(const PointResult& p, const RunConfig& /*cfg*/,
                                     const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const Model& m = p.model;
  const Index n = m.grid_s.n;
  const RVector axis = m.coupling.w_signal.head(n);
  std::vector<std::string> files;
  auto path = [&](const std::string& f) {
    files.push_back(f);
    return (fs::path(dir) / f).string();
  };

  nlohmann::json j;
  j["U_P_pJ"] = p.U_P_pJ;
  j["pump_photons"] = m.pump.photons();
  j["dwell_time_s"] = m.coupling.time_unit;
  j["window_s"] = {m.t_start * m.coupling.time_unit, m.t_end * m.coupling.time_unit};
  j["window_extensions"] = m.window_extensions;
  j["coupling_prefactor_per_s"] = {m.coupling.c.real() / m.coupling.time_unit,
                                   m.coupling.c.imag() / m.coupling.time_unit};
  j["escape_efficiency_S"] = m.S.escape_efficiency();

  if (p.full && p.obs_full) {
    const auto& o = *p.obs_full;
    write_axes_csv(path("J_full_abs.csv"), axis, axis, abs_block(o.J, n));
    write_complex_csv(path("J_full_complex.csv"), axis, o.J.topLeftCorner(n, n));
    write_trajectory_csv(path("trajectory.csv"), p.full->trajectory);
    write_axes_csv(path("g2_full.csv"), o.g2.times, o.g2.times, o.g2.normalized());
    nlohmann::json f = solution_json(o);
    f["steps"] = p.full->steps;
    f["step_s"] = p.full->step * m.coupling.time_unit;
    f["max_symplectic_residual"] = p.full->max_sympl;
    f["max_symmetry_residual"] = p.full->max_symm;
    f["max_Q_drift"] = p.full->max_q_drift;
    f["theta_a"] = p.full->final.theta_a;
    f["theta_b"] = p.full->final.theta_b;
    f["pump_photons_final"] = p.full->final.beta.squaredNorm();
    if (p.step_halving_rel) f["step_halving_rel_change"] = *p.step_halving_rel;
    j["full"] = f;
  }
  if (p.W1 && p.obs_first) {
    const auto& o = *p.obs_first;
    write_axes_csv(path("J_first_abs.csv"), axis, axis, abs_block(o.J, n));
    write_complex_csv(path("J_first_complex.csv"), axis, o.J.topLeftCorner(n, n));
    write_axes_csv(path("g2_first.csv"), o.g2.times, o.g2.times, o.g2.normalized());
    nlohmann::json f = solution_json(o);
    f["photons_from_spectrum"] = p.n_first_ket;
    j["first_order"] = f;
  }
  if (p.obs_full && p.obs_first) {
    j["J_relative_difference"] =
        (p.obs_full->J - p.obs_first->J).norm() / std::max(p.obs_first->J.norm(), 1e-300);
  }
  write_json(path("point.json"), j);
  return files;
}

int run(const RunConfig& cfg, int threads) {
  namespace fs = std::filesystem;
  const fs::path root(cfg.directory);
  fs::create_directories(root);

  nlohmann::json manifest;
  manifest["program"] = "simulate";
  manifest["version"] = kVersion;
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
  manifest["config"] = config_to_json(cfg);
  manifest["overridden"] = nlohmann::json(std::vector<std::string>(cfg.overridden.begin(), cfg.overridden.end()));

  if (cfg.mode == "fock") {
    try {
      const FockConfig fc = fock_config(cfg);
      const FockTrajectory tr = evolve_fock(fc);
      const GaussianityReport rep = gaussianity_gap(fc, tr);
      write_json((root / "fock_report.json").string(), fock_report_json(rep));
      manifest["points"] = nlohmann::json::array();
      manifest["files"] = {"fock_report.json"};
      manifest["status"] = "complete";
      write_json((root / "manifest.json").string(), manifest);
      return 0;
    } catch (const Error& e) {
      std::cerr << "[" << e.stage() << "] " << e.what() << '\n';
      manifest["status"] = "failed";
      manifest["error"] = e.what();
      write_json((root / "manifest.json").string(), manifest);
      return 1;
    }
  }

  const std::vector<double> energies = cfg.energies_pJ();
  manifest["energies_pJ"] = energies;
  const RunOptions opt = options_for(cfg);

  struct Slot {
    std::optional<SweepRecord> record;
    nlohmann::json info;
  };
  std::vector<Slot> slots(energies.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= energies.size()) return;
      const std::string sub = point_dir_name(energies[i]);
      nlohmann::json info;
      info["U_P_pJ"] = energies[i];
      info["directory"] = sub;
      try {
        const PointResult p = run_point(cfg, energies[i], opt);
        info["files"] = write_point(p, cfg, (root / sub).string());
        if (p.full) {
          info["max_symplectic_residual"] = p.full->max_sympl;
          info["max_symmetry_residual"] = p.full->max_symm;
          info["max_Q_drift"] = p.full->max_q_drift;
          info["steps"] = p.full->steps;
        }
        info["status"] = "complete";
        slots[i].record = to_record(p, cfg);
      } catch (const Error& e) {
        {
          std::lock_guard<std::mutex> lk(err_mutex);
          std::cerr << "[" << e.stage() << "] U_P = " << energies[i] << " pJ: " << e.what() << '\n';
        }
        info["status"] = "failed";
        info["stage"] = e.stage();
        info["error"] = e.what();
      }
      slots[i].info = info;
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(energies.size())));
  std::vector<std::thread> pool;
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool ok = true;
  std::vector<SweepRecord> recs;
  manifest["points"] = nlohmann::json::array();
  double max_sympl = 0.0, max_symm = 0.0, max_q = 0.0;
  for (const auto& s : slots) {
    manifest["points"].push_back(s.info);
    if (s.record) recs.push_back(*s.record);
    else ok = false;
    if (s.info.contains("max_symplectic_residual")) {
      max_sympl = std::max(max_sympl, s.info["max_symplectic_residual"].get<double>());
      max_symm = std::max(max_symm, s.info["max_symmetry_residual"].get<double>());
      max_q = std::max(max_q, s.info["max_Q_drift"].get<double>());
    }
  }
  manifest["invariant_maxima"] = {{"symplectic", max_sympl}, {"symmetry", max_symm}, {"Q_drift", max_q}};
  manifest["status"] = ok ? "complete" : "partial";

  nlohmann::json summary;
  summary["records"] = nlohmann::json::array();
  for (const auto& r : sweep_summary(recs)) summary["records"].push_back(record_json(r, opt.full, opt.first));
  write_json((root / "summary.json").string(), summary);
  write_json((root / "manifest.json").string(), manifest);

  if (cfg.render) {
    try {
      render_bundle(root.string());
    } catch (const Error& e) {
      std::cerr << "[" << e.stage() << "] render: " << e.what() << '\n';
      return 1;
    }
  }
  return ok ? 0 : 1;
}

}  // namespace ringsq
