#pragma once

#include "ringsq/types.hpp"

namespace ringsq {

/// V = H P with H = cosh(u) = F diag(s) F† and P = e^{iφ} unitary.
struct PolarParts {
  CMatrix H;
  CMatrix P;
  CMatrix F;
  RVector s;  // eigenvalues of H, clamped to ≥ 1
  RVector r;  // arccosh(s)

  /// u = F diag(r) F†.
  CMatrix u() const;
};

PolarParts polar_decompose(const CMatrix& V);

/// Hermitian φ with e^{iφ} = P. Eigenphases are principal unless `branch`
/// (one integer per eigenphase) shifts them by 2π·branch.
CMatrix extract_phi(const CMatrix& P, const Eigen::VectorXi* branch = nullptr);

/// e^{iφ} for Hermitian φ.
CMatrix exp_i_hermitian(const CMatrix& phi);

/// J = K⁻¹ W e^{iφᵀ} with K = F diag(sinh r / r) F†.
CMatrix extract_J(const CMatrix& W, const PolarParts& polar, const CMatrix& phi);

/// Polar form of the squeezing matrix J = u e^{iα}.
struct SqueezePolar {
  CMatrix u;
  CMatrix e_alpha;  // e^{iα}
  CMatrix U;        // left singular basis of J
  RVector sigma;    // singular values of J
};

SqueezePolar squeeze_polar(const CMatrix& J);

/// V' = cosh(u) e^{iφ} and W' = sinh(u) e^{iα} e^{-iφᵀ}.
void rebuild_VW(const SqueezePolar& sq, const CMatrix& phi, CMatrix& V, CMatrix& W);

/// tanh(u) e^{iα} = F diag(tanh r / r) F† J.
CMatrix tanh_factor(const PolarParts& polar, const CMatrix& J);

struct Takagi {
  RVector lambda;  // descending
  CMatrix U;       // J = U diag(λ) Uᵀ
};

Takagi takagi(const CMatrix& J);

enum class SchmidtWeighting { PhotonNumber, Amplitude };

/// K = 1 / Σ p², p ∝ sinh²λ (photon-number) or λ² (amplitude). Zero for an empty spectrum.
double schmidt_number(const RVector& lambda, SchmidtWeighting w = SchmidtWeighting::PhotonNumber);

struct SqueezeDecomp {
  CMatrix J;
  CMatrix phi;
  double symmetry_residual = 0.0;
  Takagi spectrum;
  double schmidt = 0.0;
  double schmidt_amplitude = 0.0;
};

/// Full chain from (V, W): polar decomposition, φ, J, Takagi spectrum.
SqueezeDecomp decompose(const CMatrix& V, const CMatrix& W);

/// Spectrum and Schmidt numbers of a given symmetric J.
SqueezeDecomp decompose_J(const CMatrix& J);

}  // namespace ringsq
