// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "ringsq/config.hpp"
#include "ringsq/fock_oracle.hpp"
#include "ringsq/gaussian_algebra.hpp"
#include "ringsq/gaussian_dynamics.hpp"
#include "ringsq/observables.hpp"
#include "ringsq/pipeline.hpp"

using namespace ringsq;

namespace {

constexpr double kSymplTol = 1e-9;
constexpr double kQTol = 1e-6;
constexpr double kClosedFormTol = 1e-8;
constexpr double kFockRel = 0.01;
constexpr double kFockQ = 1e-9;
constexpr double kFockMaxNa = 1.0;
constexpr double kFockMaxDepletion = 0.01;
constexpr double kN100Lo = 14.0, kN100Hi = 24.0;
constexpr double kGap80 = 1.6, kGap100 = 2.3, kGapTol = 0.5;
constexpr double kDeficit = 0.20, kDeficitTol = 0.05;
constexpr double kDeficitMaxEnergy = 60.0;
constexpr double kLowGainEnergy = 0.01;
constexpr double kLowGainJ = 1e-2, kLowGainThetaB = 1e-6, kLowGainThetaA = 1e-4;
constexpr double kPeakFull = 1.5, kPeakFirst = 0.9, kPeakTol = 0.2;
constexpr double kAgreeEnergy = 10.0, kAgreeTol = 0.05;
constexpr double kGridRel = 0.01, kStepRel = 1e-4;
constexpr double kRebuildTol = 1e-8, kBranchTol = 1e-10;

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s C%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  RunConfig cfg;
  try {
    cfg = load_config(RINGSQ_SOURCE_DIR "/configs/ring_64um.toml");
  } catch (const Error& e) {
    std::printf("FAIL config: %s\n", e.what());
    return 1;
  }
  const RunOptions both = options_for(cfg);

  // Sweep.
  std::map<double, PointResult> sweep;
  std::vector<SweepRecord> records;
  for (double U : default_sweep_pJ()) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOptions o = both;
    o.abort_on_violation = false;  // invariants are judged below
    sweep[U] = run_point(cfg, U, o);
    records.push_back(to_record(sweep[U], cfg));
    std::printf("  sweep %6.2f pJ: n_full %.4f n_first %.4f K_full %.4f K_first %.4f (%.1f s)\n", U,
                records.back().n_full, records.back().n_first, records.back().K_full,
                records.back().K_first, elapsed(t0));
  }
  records = sweep_summary(records);
  const PointResult& p100 = sweep.at(100.0);

  // C1
  {
    double sym = 0.0, tr = 0.0;
    for (const auto& [U, p] : sweep) {
      sym = std::max(sym, p.full->max_sympl);
      tr = std::max(tr, p.full->max_symm);
    }
    report(1, sym < kSymplTol && tr < kSymplTol, "symplectic invariants",
           fmt("max |VV'-WW'-1| = %.2e, max |VW^T-WV^T| = %.2e over the sweep (< %.0e)", sym, tr,
               kSymplTol));
  }

  // C2
  {
    const double q = p100.full->max_q_drift;
    report(2, q < kQTol, "Q conservation at 100 pJ",
           fmt("max relative drift %.2e (< %.0e)", q, kQTol));
  }

  // C3
  {
    const double zeta = 0.5;
    RVector w0 = RVector::Zero(1);
    const DenseCoupling d({CMatrix::Constant(1, 1, Complex(zeta, 0.0))}, w0, w0);
    CVector beta = CVector::Ones(1);
    double worst = 0.0;
    for (int k = 1; k <= 30; ++k) {
      const double x = 0.1 * k;  // 2ζt
      EvolveOptions o;
      o.t_start = 0.0;
      o.t_end = x / (2.0 * zeta);
      o.step = 1e-3;
      o.freeze_pump = true;
      o.abort_on_violation = false;
      const auto r = evolve(d, beta, o);
      worst = std::max({worst, std::abs(r.final.V(0, 0) - std::cosh(x)),
                        std::abs(r.final.W(0, 0) - Complex(0.0, -std::sinh(x)))});
    }
    report(3, worst < kClosedFormTol, "closed-form single mode",
           fmt("max |V-cosh|, |W+i sinh| = %.2e over 2zt in (0, 3] (< %.0e)", worst, kClosedFormTol));
  }

  // C4
  {
    const FockConfig fc = fock_config(cfg);
    const auto traj = evolve_fock(fc);
    const GaussianityReport g = gaussianity_gap(fc, traj);
    const double rel = std::abs(g.n_a_gaussian - g.n_a_exact) / g.n_a_exact;
    const bool regime = g.n_a_exact <= kFockMaxNa && g.depletion <= kFockMaxDepletion;
    report(4, regime && rel < kFockRel && g.Q_drift < kFockQ, "Fock oracle equivalence",
           fmt("n_exact %.5f, n_gauss %.5f, rel %.2e (< %.0e), ", g.n_a_exact, g.n_a_gaussian, rel,
               kFockRel) +
               fmt("depletion %.2e, Q drift %.2e (< %.0e)", g.depletion, g.Q_drift, kFockQ));
  }

  // C5
  {
    const double n = p100.obs_full->photons;
    report(5, n >= kN100Lo && n <= kN100Hi, "photon number at 100 pJ",
           fmt("tr(W*W^T) = %.4f, required [%.0f, %.0f]", n, kN100Lo, kN100Hi));
  }

  // C6
  {
    std::map<double, SweepRecord> by;
    for (const auto& r : records) by[r.U_P_pJ] = r;
    const double g80 = by.at(80.0).gap_dB, g100 = by.at(100.0).gap_dB;
    bool ok = std::abs(g80 - kGap80) <= kGapTol && std::abs(g100 - kGap100) <= kGapTol;
    std::string detail = fmt("gap 80 pJ %.3f dB (%.1f +- %.1f), ", g80, kGap80, kGapTol) +
                         fmt("gap 100 pJ %.3f dB (%.1f +- %.1f); deficit", g100, kGap100, kGapTol);
    for (const auto& r : records) {
      if (r.U_P_pJ > kDeficitMaxEnergy) continue;
      const double def = 1.0 - r.n_first / r.n_full;
      ok = ok && std::abs(def - kDeficit) <= kDeficitTol;
      detail += fmt(" %g:%.1f%%", r.U_P_pJ, 100.0 * def);
    }
    detail += fmt(" (%.0f +- %.0f points)", 100.0 * kDeficit, 100.0 * kDeficitTol);
    report(6, ok, "first-order squeezing gap", detail);
  }

  // C7
  {
    bool ok = true;
    std::string detail;
    for (const auto& r : records) {
      ok = ok && r.K_first >= r.K_full;
      detail += fmt("%g:%.3f/%.3f ", r.U_P_pJ, r.K_first, r.K_full);
    }
    report(7, ok, "Schmidt ordering", "K_first/K_full " + detail);
  }

  // C8
  {
    RunOptions o = both;
    o.abort_on_violation = false;
    const PointResult p = run_point(cfg, kLowGainEnergy, o);
    const double rel = (p.obs_full->J - p.obs_first->J).norm() / p.obs_first->J.norm();
    const double tb = p.full->final.theta_b, ta = p.full->final.theta_a;
    report(8, rel < kLowGainJ && std::abs(tb) < kLowGainThetaB && std::abs(ta) < kLowGainThetaA,
           "low-gain consistency at 0.01 pJ",
           fmt("|J_full-J_first|/|J_first| = %.2e, theta_b = %.2e, theta_a = %.2e", rel, tb, ta));
  }

  // C9
  {
    const Peak pf = peak(p100.obs_full->g2.normalized(), p100.obs_full->g2.times);
    const Peak p1 = peak(p100.obs_first->g2.normalized(), p100.obs_first->g2.times);
    const PointResult& p10 = sweep.at(kAgreeEnergy);
    const RMatrix a = p10.obs_full->g2.normalized(), b = p10.obs_first->g2.normalized();
    const double dev = (a - b).cwiseAbs().maxCoeff() / a.maxCoeff();
    const bool ok = std::abs(pf.t1 - kPeakFull) <= kPeakTol && std::abs(pf.t2 - kPeakFull) <= kPeakTol &&
                    std::abs(p1.t1 - kPeakFirst) <= kPeakTol &&
                    std::abs(p1.t2 - kPeakFirst) <= kPeakTol && dev <= kAgreeTol;
    report(9, ok, "G2 peak locations",
           fmt("100 pJ full peak (%.3f, %.3f), first-order peak (%.3f, %.3f)", pf.t1, pf.t2, p1.t1, p1.t2) +
               fmt(" [1.5, 0.9 +- %.1f]; 10 pJ max deviation %.2f%% of peak (<= %.0f%%)", kPeakTol,
                   100.0 * dev, 100.0 * kAgreeTol));
  }

  // C10
  {
    const double n = p100.obs_full->photons;
    RunConfig fine = cfg;
    fine.n_signal = 2 * cfg.n_signal - 1;
    fine.n_pump = 2 * cfg.n_pump - 1;
    RunOptions o;
    o.first = false;
    o.abort_on_violation = false;
    const auto t0 = std::chrono::steady_clock::now();
    const PointResult pg = run_point(fine, 100.0, o);
    std::printf("  grid %d x %d: n_full %.6f (%.1f s)\n", fine.n_signal, fine.n_pump,
                pg.obs_full->photons, elapsed(t0));
    o.step_scale = 0.5;
    const PointResult ps = run_point(cfg, 100.0, o);
    const double rg = std::abs(pg.obs_full->photons - n) / n;
    const double rs = std::abs(ps.obs_full->photons - n) / n;
    report(10, rg < kGridRel && rs < kStepRel, "grid and step robustness",
           fmt("halved dk: rel change %.2e (< %.0e); halved step: rel change %.2e (< %.0e)", rg,
               kGridRel, rs, kStepRel));
  }

  // C11
  {
    const GaussianState& s = p100.full->final;
    const SqueezeDecomp& d = p100.obs_full->decomp;
    CMatrix V, W;
    rebuild_VW(squeeze_polar(d.J), d.phi, V, W);
    const double rebuild = std::max(max_abs(V - s.V), max_abs(W - s.W));
    const PolarParts pp = polar_decompose(s.V);
    Eigen::VectorXi branch(s.V.rows());
    for (Index i = 0; i < branch.size(); ++i) branch(i) = static_cast<int>(i % 5) - 2;
    const CMatrix J0 = extract_J(s.W, pp, extract_phi(pp.P));
    const CMatrix J1 = extract_J(s.W, pp, extract_phi(pp.P, &branch));
    const double shift = max_abs(J1 - J0);
    report(11, rebuild < kRebuildTol && shift < kBranchTol, "decomposition round trip",
           fmt("rebuild error %.2e (< %.0e), branch-shift change in J %.2e (< %.0e)", rebuild,
               kRebuildTol, shift, kBranchTol));
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
