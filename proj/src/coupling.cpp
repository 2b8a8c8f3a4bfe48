#include "ringsq/coupling.hpp"

#include <cmath>

namespace ringsq {

CMatrix SeparableCoupling::zeta(const CVector& beta, double t) const {
  const CVector xt = x(t);
  const Complex s = p(t).transpose() * beta;
  const Index n = xt.size();
  CMatrix z(n, n);
  for (Index j = 0; j < n; ++j) {
    const Complex sj = s * xt(j);
    for (Index i = j; i < n; ++i) z(i, j) = sj * xt(i);
    for (Index i = 0; i < j; ++i) z(i, j) = z(j, i);
  }
  return z;
}

CVector SeparableCoupling::gamma(const CMatrix& V, const CMatrix& W, double t) const {
  const CVector xc = x(t).conjugate();
  const CVector a = V.transpose() * xc;
  const CVector b = W.transpose() * xc;
  const Complex q = a.transpose() * b;
  return p(t).conjugate() * q;
}

Complex SeparableCoupling::lambda(Index mu, Index nu, Index l, double t) const {
  const CVector xt = x(t);
  return xt(mu) * xt(nu) * p(t)(l);
}

DenseCoupling::DenseCoupling(std::vector<CMatrix> lambda)
    : DenseCoupling(lambda,
                    RVector::Zero(lambda.empty() ? 0 : lambda.front().rows()),
                    RVector::Zero(static_cast<Index>(lambda.size()))) {}

DenseCoupling::DenseCoupling(std::vector<CMatrix> lambda, RVector w_signal, RVector w_pump)
    : lambda_(std::move(lambda)), w_signal_(std::move(w_signal)), w_pump_(std::move(w_pump)) {
  if (lambda_.empty()) throw Error("coupling", "no pump modes");
  n_signal_ = lambda_.front().rows();
  for (const auto& m : lambda_) {
    if (m.rows() != n_signal_ || m.cols() != n_signal_)
      throw Error("coupling", "coupling slices must be square and equal in size");
    if (max_abs(m - m.transpose()) > 1e-14 * (1.0 + max_abs(m)))
      throw Error("coupling", "coupling slices must be symmetric");
  }
  if (w_signal_.size() != n_signal_ || w_pump_.size() != pump_dim())
    throw Error("coupling", "detuning vectors do not match the coupling shape");
}

CMatrix DenseCoupling::slice_at(Index l, double t) const {
  const CVector e = (kI * w_signal_ * t).array().exp().matrix();
  const Complex el = std::exp(-kI * w_pump_(l) * t);
  return el * e.asDiagonal() * lambda_[static_cast<std::size_t>(l)] * e.asDiagonal();
}

CMatrix DenseCoupling::zeta(const CVector& beta, double t) const {
  CMatrix z = CMatrix::Zero(n_signal_, n_signal_);
  for (Index l = 0; l < pump_dim(); ++l) z += slice_at(l, t) * beta(l);
  return z;
}

CVector DenseCoupling::gamma(const CMatrix& V, const CMatrix& W, double t) const {
  const CMatrix vw = V * W.transpose();
  CVector g(pump_dim());
  for (Index l = 0; l < pump_dim(); ++l)
    g(l) = (slice_at(l, t).conjugate().array() * vw.array()).sum();
  return g;
}

Complex DenseCoupling::lambda(Index mu, Index nu, Index l, double t) const {
  const double omega = w_pump_(l) - w_signal_(mu) - w_signal_(nu);
  return lambda_[static_cast<std::size_t>(l)](mu, nu) * std::exp(-kI * omega * t);
}

}  // namespace ringsq
