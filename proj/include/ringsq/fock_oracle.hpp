#pragma once

#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "ringsq/types.hpp"

namespace ringsq {

using SparseC = Eigen::SparseMatrix<Complex>;

/// Few-mode trilinear model H = Σ Λ_{μνl} a†_μ a†_ν b_l + h.c. in a truncated
/// number basis. Signal modes come first in the basis ordering.
struct FockConfig {
  int m_a = 1;
  int m_b = 1;
  std::vector<int> cutoff;      // m_a + m_b entries
  std::vector<CMatrix> lambda;  // m_b symmetric m_a × m_a slices
  CVector beta0;                // coherent pump amplitudes
  double t_end = 1.0;
  int samples = 200;

  Index dimension() const;
  void validate() const;
};

inline constexpr Index kMaxFockDimension = 200000;

SparseC build_hamiltonian(const FockConfig& cfg);

/// Diagonal of Q = ½ Σ n_a + Σ n_b over the basis.
RVector q_diagonal(const FockConfig& cfg);

/// Occupation of mode k over the basis.
RVector occupation(const FockConfig& cfg, int mode);

struct FockSample {
  double t = 0.0;
  double n_a = 0.0;
  double n_b = 0.0;
  double Q = 0.0;
  double norm = 0.0;
};

struct FockTrajectory {
  std::vector<FockSample> samples;
  CVector psi;  // final state
  double q_drift = 0.0;     // max relative change of ⟨Q⟩
  double norm_drift = 0.0;  // max |‖ψ‖ - 1|
  long steps = 0;
};

/// Coherent pump, signal vacuum.
CVector initial_fock_state(const FockConfig& cfg);

/// RK4 on iψ' = Hψ with h‖H‖ ≤ 0.01 (row-sum bound).
FockTrajectory evolve_fock(const FockConfig& cfg);

/// Signal photon number from the Gaussian solver with the same constant coupling.
double gaussian_signal_photons(const FockConfig& cfg);

struct GaussianityReport {
  Index dim = 0;
  double depletion = 0.0;
  double n_a_exact = 0.0;
  double n_a_gaussian = 0.0;
  std::optional<double> fidelity;  // one signal mode only
  double Q_drift = 0.0;
};

GaussianityReport gaussianity_gap(const FockConfig& cfg, const FockTrajectory& traj);

/// Uhlmann fidelity (tr √(√ρ σ √ρ))² of two density matrices.
double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma);

/// Squeezed thermal state with ⟨a†a⟩ = n, ⟨aa⟩ = m, truncated to dim × dim.
CMatrix squeezed_thermal(double n, Complex m, Index dim);

}  // namespace ringsq
