#pragma once

#include <vector>

#include "ringsq/types.hpp"

namespace ringsq {

/// Trilinear coupling Λ_{μνl}(t) between signal modes μ, ν and pump modes l.
/// Time is dimensionless throughout the solver.
class Coupling {
 public:
  virtual ~Coupling() = default;

  virtual Index signal_dim() const = 0;
  virtual Index pump_dim() const = 0;

  /// ζ_{μν} = Σ_l Λ_{μνl}(t) β_l.
  virtual CMatrix zeta(const CVector& beta, double t) const = 0;

  /// γ_l = Σ_{μν} conj(Λ_{μνl}(t)) [V Wᵀ]_{μν}.
  virtual CVector gamma(const CMatrix& V, const CMatrix& W, double t) const = 0;

  /// Value of a single element, used by the Fock oracle and by tests.
  virtual Complex lambda(Index mu, Index nu, Index l, double t) const = 0;
};

/// Coupling written as Λ_{μνl}(t) = x_μ(t) x_ν(t) p_l(t).
/// The solver takes a rank-1 fast path for this form.
class SeparableCoupling : public Coupling {
 public:
  virtual CVector x(double t) const = 0;
  virtual CVector p(double t) const = 0;

  CMatrix zeta(const CVector& beta, double t) const override;
  CVector gamma(const CMatrix& V, const CMatrix& W, double t) const override;
  Complex lambda(Index mu, Index nu, Index l, double t) const override;
};

/// Explicit small coupling: one symmetric signal matrix per pump mode, each
/// rotating as exp(-i Ω_{μνl} t) with Ω_{μνl} = w_pump[l] - w_sig[μ] - w_sig[ν].
class DenseCoupling : public Coupling {
 public:
  explicit DenseCoupling(std::vector<CMatrix> lambda);
  DenseCoupling(std::vector<CMatrix> lambda, RVector w_signal, RVector w_pump);

  Index signal_dim() const override { return n_signal_; }
  Index pump_dim() const override { return static_cast<Index>(lambda_.size()); }

  CMatrix zeta(const CVector& beta, double t) const override;
  CVector gamma(const CMatrix& V, const CMatrix& W, double t) const override;
  Complex lambda(Index mu, Index nu, Index l, double t) const override;

  const CMatrix& slice(Index l) const { return lambda_[static_cast<std::size_t>(l)]; }

 private:
  CMatrix slice_at(Index l, double t) const;

  std::vector<CMatrix> lambda_;
  RVector w_signal_;
  RVector w_pump_;
  Index n_signal_ = 0;
};

}  // namespace ringsq
