#pragma once

#include <functional>
#include <vector>

#include "ringsq/coupling.hpp"
#include "ringsq/ring_model.hpp"
#include "ringsq/types.hpp"

namespace ringsq {

/// Bogoliubov state a(t) = V a + W a†, pump amplitudes β and the two global
/// phases of the Gaussian ket.
struct GaussianState {
  double t = 0.0;
  CMatrix V;
  CMatrix W;
  CVector beta;
  double theta_a = 0.0;
  double theta_b = 0.0;

  static GaussianState initial(Index signal_dim, const CVector& beta_in, double t0);
};

struct Derivative {
  CMatrix dV;
  CMatrix dW;
  CVector dbeta;
  double dtheta_b = 0.0;
};

CMatrix compute_zeta(const Coupling& coupling, const CVector& beta, double t);
CVector compute_gamma(const Coupling& coupling, const CMatrix& V, const CMatrix& W, double t);
Derivative derivative(const GaussianState& s, const Coupling& coupling);

/// max |VV† - WW† - 1| and max |VWᵀ - WVᵀ|.
double symplectic_residual(const CMatrix& V, const CMatrix& W);
double symmetry_residual(const CMatrix& V, const CMatrix& W);

/// One row of the trajectory dump. Time is in seconds.
struct TrajectorySample {
  double t_s = 0.0;
  double frobW = 0.0;
  double pump_photons = 0.0;
  double Q = 0.0;
  double sympl_res = 0.0;
  double symm_res = 0.0;
};

struct EvolveOptions {
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;           // requested step; rounded down to fit the window
  int sample_stride = 100;     // steps between samples
  bool freeze_pump = false;    // keep β at β_in (first-order regime, negative control)
  bool track_theta_a = true;
  bool abort_on_violation = true;
  double sympl_tol = 1e-9;
  double q_tol = 1e-6;
  double time_unit = 1.0;      // seconds per solver time unit, for the dump
};

struct EvolveResult {
  GaussianState final;
  std::vector<TrajectorySample> trajectory;
  double max_sympl = 0.0;
  double max_symm = 0.0;
  double max_q_drift = 0.0;  // relative to the initial ⟨Q⟩
  long steps = 0;
  double step = 0.0;
};

/// Fixed-step RK4 from V = 1, W = 0, β = β_in. Separable couplings use a
/// rank-1 update path, anything else the dense right-hand side.
EvolveResult evolve(const Coupling& coupling, const CVector& beta_in, const EvolveOptions& opt);

/// Integrand of θ_a: -Re tr(ζ* tanh(u) e^{iα}), with tanh(u) e^{iα} = W (V*)⁻¹.
double theta_a_rate(const CMatrix& zeta, const CMatrix& V, const CMatrix& W);

struct FirstOrder {
  CMatrix W;  // -2i ∫ ζ dt with the pump frozen at β_in; also the squeezing matrix
};

/// Window integral of ζ in closed form per matrix element.
FirstOrder first_order(const CouplingTensor& coupling, const CVector& beta_in, double t_start,
                       double t_end);

/// ∫ e^{iΩt} dt over [t0, t1], stable as Ω → 0.
Complex window_integral(double omega, double t0, double t1);

}  // namespace ringsq
