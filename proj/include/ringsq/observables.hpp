#pragma once

#include <vector>

#include "ringsq/ring_model.hpp"
#include "ringsq/types.hpp"

namespace ringsq {

/// tr(W* Wᵀ).
double photon_number(const CMatrix& W);

/// Photons in one output channel of a two-channel signal space of size 2n.
double channel_photon_number(const CMatrix& W, Channel ch, Index n);

/// ⟨Q⟩ = ½ tr(W†W) + β†β.
double conserved_Q(const CMatrix& W, const CVector& beta);

/// Squeezing in dB of a single mode holding n photons, 20 log10(e) asinh(√n).
double squeezing_dB(double photons);

/// Output-channel moments ⟨a†_k a_k'⟩ = [W* Wᵀ] and ⟨a_k a_k'⟩ = [V Wᵀ].
struct MomentMatrices {
  CMatrix N;
  CMatrix M;
  RVector w;        // detunings v (k - K) in solver frequency units
  double dw = 0.0;  // grid spacing in the same units
};

/// Moments restricted to one channel; w holds that channel's detunings.
MomentMatrices moment_matrices(const CMatrix& V, const CMatrix& W, Channel ch, Index n,
                               const RVector& w, double dw);

/// Photon flux density (Δw/2π) e(t)† N e(t) with e_k(t) = exp(-i w_k t).
RVector flux_density(const MomentMatrices& m, const RVector& times);

struct G2Grid {
  RVector times;  // solver time units
  RMatrix G2;     // unnormalized
  double flux = 0.0;  // Φ in solver frequency units
  RMatrix normalized() const { return flux > 0.0 ? RMatrix(G2 / (flux * flux)) : RMatrix(G2); }
};

/// G² = N(t1,t1) N(t2,t2) + |N(t1,t2)|² + |M(t1,t2)|², Φ = photons / τ_P.
G2Grid g2(const MomentMatrices& m, const RVector& times, double photons, double pulse_duration);

RVector uniform_times(double t0, double t1, Index n);

/// Location of the maximum: (t1, t2, value).
struct Peak {
  double t1 = 0.0, t2 = 0.0, value = 0.0;
};
Peak peak(const RMatrix& G, const RVector& times);

struct SweepRecord {
  double U_P_pJ = 0.0;
  double n_full = 0.0;
  double n_first = 0.0;
  double gap_dB = 0.0;
  double K_full = 0.0;
  double K_first = 0.0;
  double Q_residual = 0.0;
  double n_first_ket = 0.0;  // Σ sinh²λ of the first-order squeezing matrix
  double gap_dB_ket = 0.0;
};

/// Fill the derived columns (gap) and sort ascending in U_P.
std::vector<SweepRecord> sweep_summary(std::vector<SweepRecord> runs);

}  // namespace ringsq
