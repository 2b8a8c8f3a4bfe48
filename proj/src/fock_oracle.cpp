#include "ringsq/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "ringsq/coupling.hpp"
#include "ringsq/gaussian_dynamics.hpp"

namespace ringsq {

namespace {

const std::string kWho = "fock_oracle";

std::vector<Index> strides(const FockConfig& cfg) {
  std::vector<Index> s(cfg.cutoff.size());
  Index acc = 1;
  for (std::size_t k = 0; k < cfg.cutoff.size(); ++k) {
    s[k] = acc;
    acc *= cfg.cutoff[k] + 1;
  }
  return s;
}

int digit(Index idx, Index stride, int cutoff) {
  return static_cast<int>((idx / stride) % (cutoff + 1));
}

}  // namespace

Index FockConfig::dimension() const {
  Index d = 1;
  for (int c : cutoff) {
    d *= c + 1;
    if (d > kMaxFockDimension) return d;
  }
  return d;
}

void FockConfig::validate() const {
  if (m_a < 1 || m_a > 2 || m_b < 1 || m_b > 2) throw Error(kWho, "mode counts must be 1 or 2");
  if (static_cast<int>(cutoff.size()) != m_a + m_b) throw Error(kWho, "one cutoff per mode is required");
  for (int c : cutoff)
    if (c < 1) throw Error(kWho, "cutoffs must be at least 1");
  if (static_cast<int>(lambda.size()) != m_b) throw Error(kWho, "one coupling slice per pump mode is required");
  for (const auto& L : lambda)
    if (L.rows() != m_a || L.cols() != m_a) throw Error(kWho, "coupling slices must be m_a x m_a");
  if (beta0.size() != m_b) throw Error(kWho, "one coherent amplitude per pump mode is required");
  if (!(t_end > 0.0)) throw Error(kWho, "evolution time must be positive");
  if (dimension() > kMaxFockDimension) {
    std::ostringstream os;
    os << "basis dimension exceeds " << kMaxFockDimension;
    throw Error(kWho, os.str());
  }
}

SparseC build_hamiltonian(const FockConfig& cfg) {
  cfg.validate();
  const Index dim = cfg.dimension();
  const auto st = strides(cfg);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Index idx = 0; idx < dim; ++idx) {
    for (int l = 0; l < cfg.m_b; ++l) {
      const int pl = cfg.m_a + l;
      const int nb = digit(idx, st[pl], cfg.cutoff[pl]);
      if (nb == 0) continue;
      for (int nu = 0; nu < cfg.m_a; ++nu) {
        for (int mu = 0; mu < cfg.m_a; ++mu) {
          const Complex lam = cfg.lambda[l](mu, nu);
          if (lam == Complex{}) continue;
          // a†_μ a†_ν b_l |n⟩
          double amp = std::sqrt(static_cast<double>(nb));
          Index out = idx - st[pl];
          const int nnu = digit(out, st[nu], cfg.cutoff[nu]);
          if (nnu + 1 > cfg.cutoff[nu]) continue;
          amp *= std::sqrt(nnu + 1.0);
          out += st[nu];
          const int nmu = digit(out, st[mu], cfg.cutoff[mu]);
          if (nmu + 1 > cfg.cutoff[mu]) continue;
          amp *= std::sqrt(nmu + 1.0);
          out += st[mu];
          trip.emplace_back(out, idx, lam * amp);
          trip.emplace_back(idx, out, std::conj(lam) * amp);
        }
      }
    }
  }
  SparseC H(dim, dim);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

RVector occupation(const FockConfig& cfg, int mode) {
  const Index dim = cfg.dimension();
  const auto st = strides(cfg);
  RVector n(dim);
  for (Index idx = 0; idx < dim; ++idx) n(idx) = digit(idx, st[mode], cfg.cutoff[mode]);
  return n;
}

RVector q_diagonal(const FockConfig& cfg) {
  RVector q = RVector::Zero(cfg.dimension());
  for (int k = 0; k < cfg.m_a; ++k) q += 0.5 * occupation(cfg, k);
  for (int k = 0; k < cfg.m_b; ++k) q += occupation(cfg, cfg.m_a + k);
  return q;
}

CVector initial_fock_state(const FockConfig& cfg) {
  cfg.validate();
  const auto st = strides(cfg);
  CVector psi = CVector::Zero(cfg.dimension());
  // Product of coherent states on the pump modes, vacuum on the signal modes.
  std::vector<CVector> coh(cfg.m_b);
  for (int l = 0; l < cfg.m_b; ++l) {
    const int c = cfg.cutoff[cfg.m_a + l];
    const Complex b = cfg.beta0(l);
    CVector v(c + 1);
    v(0) = std::exp(-0.5 * std::norm(b));
    for (int n = 1; n <= c; ++n) v(n) = v(n - 1) * b / std::sqrt(static_cast<double>(n));
    const double lost = 1.0 - v.squaredNorm();
    if (lost > 1e-8) {
      std::ostringstream os;
      os << "pump cutoff " << c << " truncates the coherent state by " << lost;
      throw Error(kWho, os.str());
    }
    coh[l] = v / v.norm();
  }
  if (cfg.m_b == 1) {
    for (int n = 0; n <= cfg.cutoff[cfg.m_a]; ++n) psi(n * st[cfg.m_a]) = coh[0](n);
  } else {
    for (int n = 0; n <= cfg.cutoff[cfg.m_a]; ++n)
      for (int k = 0; k <= cfg.cutoff[cfg.m_a + 1]; ++k)
        psi(n * st[cfg.m_a] + k * st[cfg.m_a + 1]) = coh[0](n) * coh[1](k);
  }
  return psi;
}

FockTrajectory evolve_fock(const FockConfig& cfg) {
  const SparseC H = build_hamiltonian(cfg);
  const RVector q = q_diagonal(cfg);
  RVector na = RVector::Zero(cfg.dimension()), nb = RVector::Zero(cfg.dimension());
  for (int k = 0; k < cfg.m_a; ++k) na += occupation(cfg, k);
  for (int k = 0; k < cfg.m_b; ++k) nb += occupation(cfg, cfg.m_a + k);

  double hnorm = 0.0;
  for (Index k = 0; k < H.outerSize(); ++k) {
    double col = 0.0;
    for (SparseC::InnerIterator it(H, k); it; ++it) col += std::abs(it.value());
    hnorm = std::max(hnorm, col);
  }
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end * hnorm / 0.01)));
  const double h = cfg.t_end / static_cast<double>(nsteps);
  const long stride = std::max<long>(1, nsteps / std::max(1, cfg.samples));

  FockTrajectory tr;
  tr.steps = nsteps;
  CVector psi = initial_fock_state(cfg);
  auto expect = [&](const RVector& d) { return (psi.cwiseAbs2().array() * d.array()).sum(); };
  const double q0 = expect(q);
  auto record = [&](double t) {
    FockSample s;
    s.t = t;
    s.norm = psi.norm();
    const double n2 = s.norm * s.norm;
    s.n_a = expect(na) / n2;
    s.n_b = expect(nb) / n2;
    s.Q = expect(q) / n2;
    tr.samples.push_back(s);
  };
  record(0.0);
  for (long i = 1; i <= nsteps; ++i) {
    const CVector k1 = -kI * (H * psi);
    const CVector k2 = -kI * (H * (psi + 0.5 * h * k1));
    const CVector k3 = -kI * (H * (psi + 0.5 * h * k2));
    const CVector k4 = -kI * (H * (psi + h * k3));
    psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double nrm = psi.norm();
    tr.norm_drift = std::max(tr.norm_drift, std::abs(nrm - 1.0));
    if (tr.norm_drift > 1e-6) {
      std::ostringstream os;
      os << "norm drift " << tr.norm_drift << " at t = " << i * h;
      throw Error(kWho, os.str());
    }
    tr.q_drift = std::max(tr.q_drift, std::abs(expect(q) - q0) / std::max(q0, 1e-300));
    if (i % stride == 0 || i == nsteps) record(i * h);
  }
  tr.psi = psi;
  return tr;
}

double gaussian_signal_photons(const FockConfig& cfg) {
  cfg.validate();
  DenseCoupling coupling(cfg.lambda);
  EvolveOptions opt;
  opt.t_start = 0.0;
  opt.t_end = cfg.t_end;
  double lam_max = 0.0;
  for (const auto& L : cfg.lambda) lam_max = std::max(lam_max, L.cwiseAbs().maxCoeff());
  const double rate = std::max(1e-300, 2.0 * lam_max * cfg.beta0.cwiseAbs().sum() * cfg.m_a);
  opt.step = std::min(cfg.t_end, 1.0 / rate) / 2000.0;
  opt.sample_stride = 1000000;
  opt.track_theta_a = false;
  const EvolveResult r = evolve(coupling, cfg.beta0, opt);
  return r.final.W.squaredNorm();
}

double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> er(0.5 * (rho + rho.adjoint()));
  const RVector ev = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sr = er.eigenvectors() * ev.asDiagonal() * er.eigenvectors().adjoint();
  const CMatrix inner = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<CMatrix> ei(0.5 * (inner + inner.adjoint()));
  const double tr = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

CMatrix squeezed_thermal(double n, Complex m, Index dim) {
  const double a = n + 0.5;
  const double nu = std::sqrt(std::max(a * a - std::norm(m), 0.25));
  const double nth = std::max(nu - 0.5, 0.0);
  const double r = 0.5 * std::acosh(std::max(a / nu, 1.0));
  const double theta = std::arg(m) + kPi;

  const Index big = 2 * dim + 60;
  CMatrix ann = CMatrix::Zero(big, big);
  for (Index k = 1; k < big; ++k) ann(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Complex xi = r * std::exp(kI * theta);
  const CMatrix gen = 0.5 * (std::conj(xi) * ann * ann - xi * ann.adjoint() * ann.adjoint());
  const CMatrix S = gen.exp();
  CMatrix th = CMatrix::Zero(big, big);
  const double qf = nth / (nth + 1.0);
  double p = 1.0 - qf;
  for (Index k = 0; k < big; ++k, p *= qf) th(k, k) = p;
  const CMatrix rho = S * th * S.adjoint();
  return rho.topLeftCorner(dim, dim);
}

GaussianityReport gaussianity_gap(const FockConfig& cfg, const FockTrajectory& traj) {
  GaussianityReport rep;
  rep.dim = cfg.dimension();
  const FockSample& first = traj.samples.front();
  const FockSample& last = traj.samples.back();
  rep.depletion = first.n_b > 0.0 ? 1.0 - last.n_b / first.n_b : 0.0;
  rep.n_a_exact = last.n_a;
  rep.n_a_gaussian = gaussian_signal_photons(cfg);
  rep.Q_drift = traj.q_drift;
  if (cfg.m_a == 1) {
    const Index da = cfg.cutoff[0] + 1;
    const Index rest = rep.dim / da;
    const CVector psi = traj.psi / traj.psi.norm();
    const Eigen::Map<const CMatrix> Psi(psi.data(), da, rest);
    const CMatrix rho = Psi * Psi.adjoint();
    Complex n = 0.0, m = 0.0;
    for (Index k = 0; k < da; ++k) n += static_cast<double>(k) * rho(k, k);
    // ⟨aa⟩ = tr(ρ a a) = Σ_k ρ(k, k+2) √((k+1)(k+2))
    for (Index k = 0; k + 2 < da; ++k) m += rho(k + 2, k) * std::sqrt((k + 1.0) * (k + 2.0));
    const CMatrix sigma = squeezed_thermal(n.real(), m, da);
    rep.fidelity = uhlmann_fidelity(rho, sigma);
  }
  return rep;
}

}  // namespace ringsq
