#include "ringsq/gaussian_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace ringsq {

namespace {

constexpr double kZeroR = 1e-8;

CMatrix spectral(const CMatrix& F, const RVector& d) {
  return F * d.asDiagonal() * F.adjoint();
}

}  // namespace

CMatrix PolarParts::u() const { return spectral(F, r); }

PolarParts polar_decompose(const CMatrix& V) {
  if (V.rows() != V.cols()) throw Error("gaussian_algebra", "V must be square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(V * V.adjoint());
  if (es.info() != Eigen::Success) throw Error("gaussian_algebra", "eigensolver failed on V V^dagger");
  PolarParts p;
  p.F = es.eigenvectors();
  const RVector s2 = es.eigenvalues();
  if (s2.size() > 0 && s2.minCoeff() < (1.0 - 1e-6) * (1.0 - 1e-6)) {
    std::ostringstream os;
    os << "cosh(u) eigenvalue " << std::sqrt(std::max(s2.minCoeff(), 0.0))
       << " is below 1: V does not come from a symplectic pair";
    throw Error("gaussian_algebra", os.str());
  }
  p.s = s2.cwiseMax(1.0).cwiseSqrt();
  p.r = p.s.unaryExpr([](double x) { return std::acosh(x); });
  p.H = spectral(p.F, p.s);
  p.P = spectral(p.F, p.s.cwiseInverse()) * V;
  return p;
}

CMatrix extract_phi(const CMatrix& P, const Eigen::VectorXi* branch) {
  Eigen::ComplexSchur<CMatrix> schur(P);
  const CMatrix& T = schur.matrixT();
  const CMatrix& Z = schur.matrixU();
  const Index n = P.rows();
  if (branch && branch->size() != n) throw Error("gaussian_algebra", "branch vector has the wrong length");
  RVector theta(n);
  for (Index i = 0; i < n; ++i) {
    theta(i) = std::arg(T(i, i));
    if (theta(i) <= -kPi) theta(i) += 2.0 * kPi;
    if (branch) theta(i) += 2.0 * kPi * (*branch)(i);
  }
  const CMatrix phi = Z * theta.asDiagonal() * Z.adjoint();
  return 0.5 * (phi + phi.adjoint());
}

CMatrix exp_i_hermitian(const CMatrix& phi) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(phi);
  const CVector e = (kI * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix extract_J(const CMatrix& W, const PolarParts& polar, const CMatrix& phi) {
  const RVector kinv = polar.r.unaryExpr([](double r) { return r < kZeroR ? 1.0 : r / std::sinh(r); });
  return spectral(polar.F, kinv) * W * exp_i_hermitian(phi).transpose();
}

SqueezePolar squeeze_polar(const CMatrix& J) {
  Eigen::BDCSVD<CMatrix> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SqueezePolar sq;
  sq.U = svd.matrixU();
  sq.sigma = svd.singularValues();
  sq.u = spectral(sq.U, sq.sigma);
  sq.e_alpha = sq.U * svd.matrixV().adjoint();
  return sq;
}

void rebuild_VW(const SqueezePolar& sq, const CMatrix& phi, CMatrix& V, CMatrix& W) {
  const CMatrix E = exp_i_hermitian(phi);
  const RVector ch = sq.sigma.array().cosh();
  const RVector sh = sq.sigma.array().sinh();
  V = spectral(sq.U, ch) * E;
  W = spectral(sq.U, sh) * sq.e_alpha * E.conjugate();
}

CMatrix tanh_factor(const PolarParts& polar, const CMatrix& J) {
  const RVector d = polar.r.unaryExpr([](double r) { return r < kZeroR ? 1.0 : std::tanh(r) / r; });
  return spectral(polar.F, d) * J;
}

Takagi takagi(const CMatrix& J) {
  const Index n = J.rows();
  Eigen::BDCSVD<CMatrix> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Takagi out;
  out.lambda = svd.singularValues();
  out.U = svd.matrixU();
  if (n == 0) return out;
  const double smax = out.lambda(0);
  if (smax == 0.0) return out;

  // J = U C Uᵀ with C block diagonal over clusters of equal singular values;
  // each block is σ times a symmetric unitary Q, absorbed as U ← U √Q.
  const double cluster_tol = 1e-9 * smax;
  const double zero_tol = 1e-14 * smax;
  Index start = 0;
  while (start < n && out.lambda(start) > zero_tol) {
    Index end = start + 1;
    while (end < n && out.lambda(end - 1) - out.lambda(end) <= cluster_tol &&
           out.lambda(end) > zero_tol)
      ++end;
    const Index m = end - start;
    const auto Ub = out.U.middleCols(start, m);
    const double sbar = out.lambda.segment(start, m).mean();
    CMatrix Q = Ub.adjoint() * J * Ub.conjugate() / sbar;
    if (m > 1) {
      Eigen::JacobiSVD<CMatrix> qs(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Q = qs.matrixU() * qs.matrixV().adjoint();
      Q = 0.5 * (Q + Q.transpose());
    } else {
      Q(0, 0) /= std::abs(Q(0, 0));
    }
    const CMatrix root = Q.sqrt();
    out.U.middleCols(start, m) = (Ub * root).eval();
    start = end;
  }
  return out;
}

double schmidt_number(const RVector& lambda, SchmidtWeighting w) {
  RVector p = w == SchmidtWeighting::PhotonNumber ? RVector(lambda.array().sinh().square())
                                                   : RVector(lambda.array().square());
  const double total = p.sum();
  if (!(total > 0.0)) return 0.0;
  p /= total;
  return 1.0 / p.squaredNorm();
}

SqueezeDecomp decompose_J(const CMatrix& J) {
  SqueezeDecomp d;
  d.J = J;
  d.symmetry_residual = max_abs(J - J.transpose());
  d.spectrum = takagi(0.5 * (J + J.transpose()));
  d.schmidt = schmidt_number(d.spectrum.lambda, SchmidtWeighting::PhotonNumber);
  d.schmidt_amplitude = schmidt_number(d.spectrum.lambda, SchmidtWeighting::Amplitude);
  return d;
}

SqueezeDecomp decompose(const CMatrix& V, const CMatrix& W) {
  const PolarParts polar = polar_decompose(V);
  const CMatrix phi = extract_phi(polar.P);
  const CMatrix J = extract_J(W, polar, phi);
  const double res = max_abs(J - J.transpose());
  if (res >= 1e-8 * std::max(1.0, max_abs(J))) {
    std::ostringstream os;
    os << "extracted J is not symmetric (residual " << res << ")";
    throw Error("gaussian_algebra", os.str());
  }
  SqueezeDecomp d = decompose_J(J);
  d.phi = phi;
  return d;
}

}  // namespace ringsq
