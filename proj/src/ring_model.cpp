#include "ringsq/ring_model.hpp"

#include <cmath>
#include <sstream>

namespace ringsq {

std::string band_name(Band b) {
  switch (b) {
    case Band::P: return "P";
    case Band::S: return "S";
    case Band::C: return "C";
  }
  return "?";
}

ResonanceSpec build_resonance(Band band, double omega, double v, double q_int, double q_load) {
  const std::string who = "ring_model";
  if (!(omega > 0.0) || !(v > 0.0) || !(q_int > 0.0) || !(q_load > 0.0))
    throw Error(who, "band " + band_name(band) + ": frequency, velocity and Q values must be positive");
  if (q_load >= q_int) {
    std::ostringstream os;
    os << "band " << band_name(band) << ": q_load (" << q_load << ") must be below q_int ("
       << q_int << ")";
    throw Error(who, os.str());
  }
  ResonanceSpec s;
  s.band = band;
  s.omega = omega;
  s.v = v;
  s.K = omega / v;
  s.q_int = q_int;
  s.q_load = q_load;
  s.gamma_bar = omega / (2.0 * q_load);
  s.gamma_phantom = omega / (2.0 * q_int);
  s.gamma_actual = s.gamma_bar - s.gamma_phantom;
  s.g_actual = std::sqrt(2.0 * s.gamma_actual * v);
  s.g_phantom = std::sqrt(2.0 * s.gamma_phantom * v);
  s.critical = std::abs(q_load - 0.5 * q_int) <= 1e-12 * q_int;
  return s;
}

Complex enhancement_in(const ResonanceSpec& spec, double k, double circumference) {
  return spec.g_actual / (Complex(spec.v * (spec.K - k), -spec.gamma_bar) * std::sqrt(circumference));
}

Complex enhancement_out(const ResonanceSpec& spec, Channel n, double k, double circumference) {
  return spec.coupling(n) /
         (Complex(spec.v * (spec.K - k), spec.gamma_bar) * std::sqrt(circumference));
}

double dispersion(const ResonanceSpec& spec, double k) {
  return spec.omega + spec.v * (k - spec.K);
}

double cw_amplitude(double power, double omega, double v) {
  if (power < 0.0) throw Error("ring_model", "CW power must be non-negative");
  return std::sqrt(2.0 * kPi * power / (kHbar * omega * v));
}

KGrid KGrid::centered(Index n, double half_span) {
  if (n < 3 || n % 2 == 0) throw Error("ring_model", "grid point count must be odd and at least 3");
  if (!(half_span > 0.0)) throw Error("ring_model", "grid span must be positive");
  KGrid g;
  g.n = n;
  g.dk = 2.0 * half_span / static_cast<double>(n - 1);
  g.detuning.resize(n);
  const Index mid = n / 2;
  for (Index i = 0; i < n; ++i) g.detuning(i) = static_cast<double>(i - mid) * g.dk;
  return g;
}

CVector initial_pump(const PumpSpec& pump, const KGrid& grid, double v_pump) {
  const std::string who = "ring_model";
  if (!(pump.pulse_energy > 0.0) || !(pump.pulse_duration > 0.0) || !(pump.omega > 0.0))
    throw Error(who, "pulse energy, duration and carrier frequency must be positive");
  const double vt = v_pump * pump.pulse_duration;
  const double edge = grid.detuning(grid.n - 1);
  if (edge * vt < 4.0) {
    std::ostringstream os;
    os << "pump grid half-span " << edge * vt << "/(v_P tau_P) is below the required 4";
    throw Error(who, os.str());
  }
  const double np = pump.photons();
  const double amp = std::sqrt(grid.dk) * std::sqrt(np * vt / std::sqrt(kPi));
  CVector beta(grid.n);
  for (Index l = 0; l < grid.n; ++l) {
    const double d = grid.detuning(l) * vt;
    beta(l) = amp * std::exp(-0.5 * d * d);
  }
  const double sum = beta.squaredNorm();
  if (std::abs(sum / np - 1.0) > 0.01) {
    std::ostringstream os;
    os << "pump grid too coarse or narrow: sampled photon number is off by "
       << 100.0 * std::abs(sum / np - 1.0) << "%";
    throw Error(who, os.str());
  }
  beta *= std::sqrt(np / sum);
  return beta;
}

CVector CouplingTensor::x(double t) const {
  return (f.array() * (kI * t * w_signal.array()).exp()).matrix();
}

CVector CouplingTensor::p(double t) const {
  return (c * g.array() * (-kI * t * w_pump.array()).exp()).matrix();
}

CouplingTensor coupling_tensor(const ResonanceSpec& P, const ResonanceSpec& S,
                               const ResonanceSpec& C, const KGrid& grid_s,
                               const KGrid& grid_p, const PumpSpec& pump,
                               const RingGeometry& ring) {
  const std::string who = "ring_model";
  if (!(ring.radius > 0.0)) throw Error(who, "ring radius must be positive");
  if (!(ring.gamma_nl >= 0.0)) throw Error(who, "nonlinear parameter must be given and non-negative");
  if (std::abs(P.omega + C.omega - 2.0 * S.omega) > 1e-12 * S.omega)
    throw Error(who, "band frequencies violate omega_P + omega_C = 2 omega_S");

  const double L = ring.circumference();
  const double amp = cw_amplitude(pump.cw_power, C.omega, C.v);
  const Complex fc = enhancement_in(C, C.K, L);

  CouplingTensor t;
  t.time_unit = 1.0 / S.gamma_bar;
  t.n_signal = grid_s.n;
  const Complex c = -(kHbar * P.v * C.v * ring.gamma_nl * S.omega * L / (4.0 * kPi * kPi)) * amp *
                    fc * grid_s.dk * std::sqrt(grid_p.dk);
  t.c = c * t.time_unit;

  t.f.resize(2 * grid_s.n);
  t.w_signal.resize(2 * grid_s.n);
  for (Channel ch : {Channel::Actual, Channel::Phantom}) {
    for (Index i = 0; i < grid_s.n; ++i) {
      const double k = S.K + grid_s.detuning(i);
      const Index mu = signal_index(ch, i, grid_s.n);
      t.f(mu) = std::conj(enhancement_out(S, ch, k, L));
      t.w_signal(mu) = S.v * grid_s.detuning(i) * t.time_unit;
    }
  }
  t.g.resize(grid_p.n);
  t.w_pump.resize(grid_p.n);
  for (Index l = 0; l < grid_p.n; ++l) {
    t.g(l) = enhancement_in(P, P.K + grid_p.detuning(l), L);
    t.w_pump(l) = P.v * grid_p.detuning(l) * t.time_unit;
  }
  return t;
}

}  // namespace ringsq
