#include "ringsq/gaussian_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace ringsq {

GaussianState GaussianState::initial(Index signal_dim, const CVector& beta_in, double t0) {
  GaussianState s;
  s.t = t0;
  s.V = CMatrix::Identity(signal_dim, signal_dim);
  s.W = CMatrix::Zero(signal_dim, signal_dim);
  s.beta = beta_in;
  return s;
}

CMatrix compute_zeta(const Coupling& coupling, const CVector& beta, double t) {
  return coupling.zeta(beta, t);
}

CVector compute_gamma(const Coupling& coupling, const CMatrix& V, const CMatrix& W, double t) {
  return coupling.gamma(V, W, t);
}

Derivative derivative(const GaussianState& s, const Coupling& coupling) {
  const CMatrix z = coupling.zeta(s.beta, s.t);
  const CVector g = coupling.gamma(s.V, s.W, s.t);
  Derivative d;
  d.dV = -2.0 * kI * z * s.W.conjugate();
  d.dW = -2.0 * kI * z * s.V.conjugate();
  d.dbeta = -kI * g;
  d.dtheta_b = (g.array() * s.beta.conjugate().array()).sum().real();
  return d;
}

double symplectic_residual(const CMatrix& V, const CMatrix& W) {
  CMatrix r = V * V.adjoint() - W * W.adjoint();
  r.diagonal().array() -= 1.0;
  return max_abs(r);
}

double symmetry_residual(const CMatrix& V, const CMatrix& W) {
  const CMatrix vw = V * W.transpose();
  return max_abs(vw - vw.transpose());
}

double theta_a_rate(const CMatrix& zeta, const CMatrix& V, const CMatrix& W) {
  // Tᵀ = (V†)⁻¹ Wᵀ where T = W (V*)⁻¹.
  const CMatrix Tt = V.adjoint().partialPivLu().solve(W.transpose());
  return -(zeta.conjugate().array() * Tt.array()).sum().real();
}

namespace {

struct Stepper {
  virtual ~Stepper() = default;
  virtual void step(GaussianState& s, double h, bool freeze) = 0;
};

// RK4 with every stage increment kept in rank-1 form x uᵀ.
struct SeparableStepper final : Stepper {
  const SeparableCoupling& c;
  explicit SeparableStepper(const SeparableCoupling& cp) : c(cp) {}

  void step(GaussianState& s, double h, bool freeze) override {
    const double t = s.t;
    const CVector x1 = c.x(t), x2 = c.x(t + 0.5 * h), x4 = c.x(t + h);
    const CVector p1 = c.p(t), p2 = c.p(t + 0.5 * h), p4 = c.p(t + h);
    const Index n = x1.size();

    CMatrix X(n, 3);
    X.col(0) = x1.conjugate();
    X.col(1) = x2.conjugate();
    X.col(2) = x4.conjugate();
    const CMatrix A = s.V.transpose() * X;
    const CMatrix B = s.W.transpose() * X;

    // xᵢᵀ xⱼ* overlaps between stage times.
    const Complex x1x2 = (x1.array() * x2.conjugate().array()).sum();
    const Complex x2x2 = x2.squaredNorm();
    const Complex x2x4 = (x2.array() * x4.conjugate().array()).sum();

    CVector a, b;
    Complex sig[4];
    CVector kbeta[4];
    double kth[4];
    CVector ua[4], ub[4];  // conj(a_k), conj(b_k)

    auto stage = [&](int k, const CVector& p, const CVector& beta) {
      const Complex sv = p.transpose() * beta;
      sig[k] = -2.0 * kI * sv;
      const Complex q = a.transpose() * b;
      kbeta[k] = freeze ? CVector::Zero(beta.size()) : CVector(-kI * q * p.conjugate());
      kth[k] = (q * std::conj(sv)).real();
      ua[k] = a.conjugate();
      ub[k] = b.conjugate();
    };

    a = A.col(0);
    b = B.col(0);
    stage(0, p1, s.beta);

    a = A.col(1) + 0.5 * h * sig[0] * ub[0] * x1x2;
    b = B.col(1) + 0.5 * h * sig[0] * ua[0] * x1x2;
    stage(1, p2, s.beta + 0.5 * h * kbeta[0]);

    a = A.col(1) + 0.5 * h * sig[1] * ub[1] * x2x2;
    b = B.col(1) + 0.5 * h * sig[1] * ua[1] * x2x2;
    stage(2, p2, s.beta + 0.5 * h * kbeta[1]);

    a = A.col(2) + h * sig[2] * ub[2] * x2x4;
    b = B.col(2) + h * sig[2] * ua[2] * x2x4;
    stage(3, p4, s.beta + h * kbeta[2]);

    const double w = h / 6.0;
    CMatrix L(n, 3), RV(n, 3), RW(n, 3);
    L.col(0) = x1;
    L.col(1) = x2;
    L.col(2) = x4;
    RV.col(0) = w * sig[0] * ub[0];
    RV.col(1) = w * 2.0 * (sig[1] * ub[1] + sig[2] * ub[2]);
    RV.col(2) = w * sig[3] * ub[3];
    RW.col(0) = w * sig[0] * ua[0];
    RW.col(1) = w * 2.0 * (sig[1] * ua[1] + sig[2] * ua[2]);
    RW.col(2) = w * sig[3] * ua[3];
    s.V.noalias() += L * RV.transpose();
    s.W.noalias() += L * RW.transpose();
    if (!freeze) s.beta += w * (kbeta[0] + 2.0 * kbeta[1] + 2.0 * kbeta[2] + kbeta[3]);
    s.theta_b += w * (kth[0] + 2.0 * kth[1] + 2.0 * kth[2] + kth[3]);
    s.t = t + h;
  }
};

struct DenseStepper final : Stepper {
  const Coupling& c;
  explicit DenseStepper(const Coupling& cp) : c(cp) {}

  void step(GaussianState& s, double h, bool freeze) override {
    auto rhs = [&](const GaussianState& y) {
      Derivative d = derivative(y, c);
      if (freeze) d.dbeta.setZero();
      return d;
    };
    auto shifted = [&](const Derivative& d, double a) {
      GaussianState y = s;
      y.t = s.t + a;
      y.V += a * d.dV;
      y.W += a * d.dW;
      y.beta += a * d.dbeta;
      return y;
    };
    const Derivative k1 = rhs(s);
    const Derivative k2 = rhs(shifted(k1, 0.5 * h));
    const Derivative k3 = rhs(shifted(k2, 0.5 * h));
    const Derivative k4 = rhs(shifted(k3, h));
    const double w = h / 6.0;
    s.V += w * (k1.dV + 2.0 * k2.dV + 2.0 * k3.dV + k4.dV);
    s.W += w * (k1.dW + 2.0 * k2.dW + 2.0 * k3.dW + k4.dW);
    s.beta += w * (k1.dbeta + 2.0 * k2.dbeta + 2.0 * k3.dbeta + k4.dbeta);
    s.theta_b += w * (k1.dtheta_b + 2.0 * k2.dtheta_b + 2.0 * k3.dtheta_b + k4.dtheta_b);
    s.t += h;
  }
};

double q_value(const GaussianState& s) {
  return 0.5 * s.W.squaredNorm() + s.beta.squaredNorm();
}

}  // namespace

EvolveResult evolve(const Coupling& coupling, const CVector& beta_in, const EvolveOptions& opt) {
  const std::string who = "gaussian_dynamics";
  if (!(opt.t_end > opt.t_start)) throw Error(who, "empty integration window");
  if (!(opt.step > 0.0)) throw Error(who, "step must be positive");
  if (beta_in.size() != coupling.pump_dim()) throw Error(who, "pump vector has the wrong length");
  if (opt.sample_stride < 1) throw Error(who, "sample stride must be at least 1");

  const long nsteps = static_cast<long>(std::ceil((opt.t_end - opt.t_start) / opt.step - 1e-9));
  const double h = (opt.t_end - opt.t_start) / static_cast<double>(nsteps);

  std::unique_ptr<Stepper> stepper;
  if (const auto* sep = dynamic_cast<const SeparableCoupling*>(&coupling))
    stepper = std::make_unique<SeparableStepper>(*sep);
  else
    stepper = std::make_unique<DenseStepper>(coupling);

  EvolveResult res;
  res.step = h;
  res.steps = nsteps;
  GaussianState s = GaussianState::initial(coupling.signal_dim(), beta_in, opt.t_start);
  const double q0 = q_value(s);
  const double qscale = q0 > 0.0 ? q0 : 1.0;

  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << what << " at t = " << s.t * opt.time_unit << " s";
    throw Error(who, os.str());
  };

  double rate_prev = 0.0, t_prev = s.t;
  auto sample = [&]() {
    TrajectorySample ts;
    ts.t_s = s.t * opt.time_unit;
    ts.frobW = s.W.norm();
    ts.pump_photons = s.beta.squaredNorm();
    ts.Q = q_value(s);
    ts.sympl_res = symplectic_residual(s.V, s.W);
    ts.symm_res = symmetry_residual(s.V, s.W);
    res.max_sympl = std::max(res.max_sympl, ts.sympl_res);
    res.max_symm = std::max(res.max_symm, ts.symm_res);
    res.trajectory.push_back(ts);
    if (opt.abort_on_violation && (ts.sympl_res > opt.sympl_tol || ts.symm_res > opt.sympl_tol))
      fail("symplectic invariant violated");
    if (opt.track_theta_a) {
      const double rate = theta_a_rate(coupling.zeta(s.beta, s.t), s.V, s.W);
      if (res.trajectory.size() > 1) s.theta_a += 0.5 * (rate + rate_prev) * (s.t - t_prev);
      rate_prev = rate;
      t_prev = s.t;
    }
  };

  sample();
  for (long i = 1; i <= nsteps; ++i) {
    stepper->step(s, h, opt.freeze_pump);
    if (i == nsteps) s.t = opt.t_end;
    const double drift = std::abs(q_value(s) - q0) / qscale;
    res.max_q_drift = std::max(res.max_q_drift, drift);
    if (opt.abort_on_violation && drift > opt.q_tol) fail("<Q> conservation violated");
    if (i % opt.sample_stride == 0 || i == nsteps) sample();
  }
  res.final = std::move(s);
  return res;
}

Complex window_integral(double omega, double t0, double t1) {
  const double dt = t1 - t0;
  const double x = 0.5 * omega * dt;
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return dt * sinc * std::exp(kI * omega * (0.5 * (t0 + t1)));
}

FirstOrder first_order(const CouplingTensor& coupling, const CVector& beta_in, double t_start,
                       double t_end) {
  const Index n = coupling.signal_dim();
  const Index np = coupling.pump_dim();
  if (beta_in.size() != np) throw Error("gaussian_dynamics", "pump vector has the wrong length");
  const CVector gb = (coupling.g.array() * beta_in.array()).matrix();
  FirstOrder out;
  out.W = CMatrix::Zero(n, n);
  for (Index nu = 0; nu < n; ++nu) {
    for (Index mu = 0; mu <= nu; ++mu) {
      Complex acc = 0.0;
      for (Index l = 0; l < np; ++l)
        acc += gb(l) * window_integral(-coupling.detuning(mu, nu, l), t_start, t_end);
      const Complex w = -2.0 * kI * coupling.c * coupling.f(mu) * coupling.f(nu) * acc;
      out.W(mu, nu) = w;
      out.W(nu, mu) = w;
    }
  }
  return out;
}

}  // namespace ringsq
