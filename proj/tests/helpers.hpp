#pragma once

#include <random>

#include <Eigen/QR>

#include "ringsq/ring_model.hpp"
#include "ringsq/types.hpp"

namespace testing {

using namespace ringsq;

inline CMatrix random_complex(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

inline CMatrix random_unitary(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(n, n, rng));
  CMatrix Q = qr.householderQ();
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) Q.col(j) *= R(j, j) / std::abs(R(j, j));
  return Q;
}

inline CMatrix random_symmetric(Index n, std::mt19937_64& rng) {
  const CMatrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.transpose());
}

// V = U cosh Λ U† E, W = U sinh Λ Uᵀ conj(E), squeezing matrix U Λ Uᵀ.
struct SymplecticPair {
  CMatrix V, W, J, U, E;
  RVector lambda;
};

inline SymplecticPair random_symplectic(Index n, double scale, std::mt19937_64& rng,
                                        double max_phase = 2.5) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  SymplecticPair p;
  p.U = random_unitary(n, rng);
  p.lambda.resize(n);
  for (Index i = 0; i < n; ++i) p.lambda(i) = scale * (0.1 + ud(rng));
  const CMatrix Fe = random_unitary(n, rng);
  CVector ph(n);
  for (Index i = 0; i < n; ++i) ph(i) = std::exp(kI * max_phase * (2.0 * ud(rng) - 1.0));
  p.E = Fe * ph.asDiagonal() * Fe.adjoint();
  const RVector ch = p.lambda.array().cosh();
  const RVector sh = p.lambda.array().sinh();
  p.V = p.U * ch.cast<Complex>().asDiagonal() * p.U.adjoint() * p.E;
  p.W = p.U * sh.cast<Complex>().asDiagonal() * p.U.transpose() * p.E.conjugate();
  p.J = p.U * p.lambda.cast<Complex>().asDiagonal() * p.U.transpose();
  return p;
}

// Small separable coupling with generic (asymmetric) factors.
inline CouplingTensor toy_tensor(Index ns, Index np, std::mt19937_64& rng, double strength = 0.3) {
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  CouplingTensor t;
  t.c = strength * Complex(0.3, -1.0);
  t.f = random_complex(ns, 1, rng).col(0) * 0.5;
  t.g = random_complex(np, 1, rng).col(0) * 0.5;
  t.w_signal.resize(ns);
  t.w_pump.resize(np);
  for (Index i = 0; i < ns; ++i) t.w_signal(i) = 2.0 * ud(rng);
  for (Index i = 0; i < np; ++i) t.w_pump(i) = 2.0 * ud(rng);
  t.n_signal = ns;
  return t;
}

}  // namespace testing
