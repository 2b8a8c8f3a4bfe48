#include "ringsq/observables.hpp"

#include <algorithm>
#include <cmath>

namespace ringsq {

double photon_number(const CMatrix& W) { return W.squaredNorm(); }

double channel_photon_number(const CMatrix& W, Channel ch, Index n) {
  if (W.rows() != 2 * n) throw Error("observables", "signal space is not two channels of the given size");
  return W.middleRows(signal_index(ch, 0, n), n).squaredNorm();
}

double conserved_Q(const CMatrix& W, const CVector& beta) {
  return 0.5 * W.squaredNorm() + beta.squaredNorm();
}

double squeezing_dB(double photons) {
  return 20.0 * std::log10(std::exp(1.0)) * std::asinh(std::sqrt(std::max(photons, 0.0)));
}

MomentMatrices moment_matrices(const CMatrix& V, const CMatrix& W, Channel ch, Index n,
                               const RVector& w, double dw) {
  if (w.size() != n) throw Error("observables", "detuning vector does not match the channel size");
  const Index o = signal_index(ch, 0, n);
  const auto Wc = W.middleRows(o, n);
  MomentMatrices m;
  m.N = Wc.conjugate() * Wc.transpose();
  m.M = V.middleRows(o, n) * Wc.transpose();
  m.w = w;
  m.dw = dw;
  return m;
}

namespace {

CMatrix phases(const RVector& w, const RVector& times) {
  CMatrix E(w.size(), times.size());
  for (Index j = 0; j < times.size(); ++j)
    for (Index k = 0; k < w.size(); ++k) E(k, j) = std::exp(-kI * w(k) * times(j));
  return E;
}

}  // namespace

RVector flux_density(const MomentMatrices& m, const RVector& times) {
  const CMatrix E = phases(m.w, times);
  const CMatrix NE = m.N * E;
  RVector out(times.size());
  for (Index j = 0; j < times.size(); ++j)
    out(j) = m.dw / (2.0 * kPi) * E.col(j).dot(NE.col(j)).real();
  return out;
}

G2Grid g2(const MomentMatrices& m, const RVector& times, double photons, double pulse_duration) {
  if (times.size() == 0) throw Error("observables", "empty G2 time grid");
  const CMatrix E = phases(m.w, times);
  const double scale = m.dw / (2.0 * kPi);
  const CMatrix Nt = scale * (E.adjoint() * m.N * E);
  const CMatrix Mt = scale * (E.transpose() * m.M * E);
  const Index T = times.size();
  G2Grid g;
  g.times = times;
  g.G2.resize(T, T);
  for (Index j = 0; j < T; ++j)
    for (Index i = 0; i < T; ++i)
      g.G2(i, j) = Nt(i, i).real() * Nt(j, j).real() + std::norm(Nt(i, j)) + std::norm(Mt(i, j));
  g.G2 = 0.5 * (g.G2 + g.G2.transpose()).eval();
  const double top = g.G2.maxCoeff();
  g.G2 = g.G2.unaryExpr([top](double x) { return x < 0.0 && x > -1e-12 * top ? 0.0 : x; });
  g.flux = photons / pulse_duration;
  return g;
}

RVector uniform_times(double t0, double t1, Index n) {
  return RVector::LinSpaced(n, t0, t1);
}

Peak peak(const RMatrix& G, const RVector& times) {
  Index i = 0, j = 0;
  Peak p;
  p.value = G.maxCoeff(&i, &j);
  p.t1 = times(i);
  p.t2 = times(j);
  return p;
}

std::vector<SweepRecord> sweep_summary(std::vector<SweepRecord> runs) {
  std::sort(runs.begin(), runs.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.U_P_pJ < b.U_P_pJ; });
  for (auto& r : runs) {
    r.gap_dB = squeezing_dB(r.n_full) - squeezing_dB(r.n_first);
    r.gap_dB_ket = squeezing_dB(r.n_full) - squeezing_dB(r.n_first_ket);
  }
  return runs;
}

}  // namespace ringsq
