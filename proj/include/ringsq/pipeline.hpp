#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringsq/config.hpp"
#include "ringsq/fock_oracle.hpp"
#include "ringsq/gaussian_algebra.hpp"
#include "ringsq/gaussian_dynamics.hpp"
#include "ringsq/observables.hpp"
#include "ringsq/ring_model.hpp"

namespace ringsq {

/// Everything derived from a configuration at one pulse energy.
struct Model {
  ResonanceSpec P, S, C;
  KGrid grid_s, grid_p;
  PumpSpec pump;
  RingGeometry ring;
  CouplingTensor coupling;
  CVector beta_in;
  double t_start = 0.0;  // solver units
  double t_end = 0.0;
  double step = 0.0;
  double tau = 0.0;      // pulse duration in solver units
  int window_extensions = 0;
};

ResonanceSpec resonance_from(Band band, const BandConfig& b);
Model build_model(const RunConfig& cfg, double pulse_energy_pJ);

/// ∫ over the last 5% of the window of ‖ζ‖_F dt, relative to the whole window,
/// with the pump held at β_in.
double zeta_tail_fraction(const CouplingTensor& coupling, const CVector& beta, double t0,
                          double t1, double h);

struct SolutionObservables {
  CMatrix J;             // squeezing matrix
  SqueezeDecomp decomp;
  double photons = 0.0;          // tr(W* Wᵀ)
  double photons_actual = 0.0;
  double photons_phantom = 0.0;
  double schmidt = 0.0;          // configured weighting
  G2Grid g2;
};

struct PointResult {
  double U_P_pJ = 0.0;
  Model model;
  std::optional<EvolveResult> full;
  std::optional<SolutionObservables> obs_full;
  std::optional<CMatrix> W1;
  std::optional<SolutionObservables> obs_first;
  double n_first_ket = 0.0;
  double q_residual = 0.0;       // final relative ⟨Q⟩ drift
  std::optional<double> step_halving_rel;
};

struct RunOptions {
  bool full = true;
  bool first = true;
  bool verify_step_halving = false;
  bool abort_on_violation = true;
  double step_scale = 1.0;  // multiplies the configured step
};

RunOptions options_for(const RunConfig& cfg);

/// Observables of a state (V, W) on the model's grids.
SolutionObservables observe(const Model& m, const RunConfig& cfg, const CMatrix& V,
                            const CMatrix& W, bool from_first_order);

PointResult run_point(const RunConfig& cfg, double pulse_energy_pJ, const RunOptions& opt);

/// Fock oracle with the [fock] section.
FockConfig fock_config(const RunConfig& cfg);
nlohmann::json fock_report_json(const GaussianityReport& r);

SweepRecord to_record(const PointResult& p, const RunConfig& cfg);

/// Writes CSV/JSON exports of one point into dir; returns the file names.
std::vector<std::string> write_point(const PointResult& p, const RunConfig& cfg, const std::string& dir);

/// Runs the configured energies (worker pool), writes the bundle and images.
/// Returns the process exit code.
int run(const RunConfig& cfg, int threads);

std::string point_dir_name(double pulse_energy_pJ);

}  // namespace ringsq
