#pragma once

#include <string>

#include "ringsq/coupling.hpp"
#include "ringsq/types.hpp"

namespace ringsq {

enum class Band { P, S, C };
enum class Channel { Actual = 0, Phantom = 1 };

std::string band_name(Band b);

/// Physical parameters of one ring resonance.
struct ResonanceSpec {
  Band band = Band::S;
  double omega = 0.0;          // rad/s
  double v = 0.0;              // group velocity, m/s
  double K = 0.0;              // reference wavenumber ω/v, 1/m
  double q_int = 0.0;
  double q_load = 0.0;
  double gamma_bar = 0.0;      // total field decay rate, 1/s
  double gamma_phantom = 0.0;  // scattering loss rate, 1/s
  double gamma_actual = 0.0;   // bus-waveguide escape rate, 1/s
  double g_actual = 0.0;       // coupling constants, m^(1/2)/s
  double g_phantom = 0.0;
  bool critical = false;       // Q_load == Q_int / 2

  double coupling(Channel n) const { return n == Channel::Actual ? g_actual : g_phantom; }
  double escape_efficiency() const { return gamma_actual / gamma_bar; }
};

ResonanceSpec build_resonance(Band band, double omega, double v, double q_int, double q_load);

/// F_{J-}(k): enhancement of the actual input channel.
Complex enhancement_in(const ResonanceSpec& spec, double k, double circumference);

/// F^{(n)}_{J+}(k): enhancement of output channel n.
Complex enhancement_out(const ResonanceSpec& spec, Channel n, double k, double circumference);

/// Linear dispersion ω(k) = ω_J + v_J (k - K_J).
double dispersion(const ResonanceSpec& spec, double k);

/// Classical amplitude replacing the CW pump operators, √(2π P / (ħ ω v)).
double cw_amplitude(double power, double omega, double v);

/// Uniform wavenumber grid centered on a resonance. Detunings are k - K in 1/m.
struct KGrid {
  Index n = 0;
  double dk = 0.0;
  RVector detuning;

  static KGrid centered(Index n, double half_span);
  /// Period in time of anything sampled on this grid, for group velocity v.
  double period(double v) const { return 2.0 * kPi / (v * dk); }
};

/// Signal mode index: the actual channel occupies [0, n), the phantom channel [n, 2n).
inline Index signal_index(Channel ch, Index i, Index n) {
  return static_cast<Index>(ch) * n + i;
}

struct PumpSpec {
  double cw_power = 0.0;        // W
  double pulse_energy = 0.0;    // J
  double pulse_duration = 0.0;  // s
  double omega = 0.0;           // rad/s, pulsed pump carrier

  double photons() const { return pulse_energy / (kHbar * omega); }
};

/// Discrete pump amplitudes √Δk β(k_l), renormalized so Σ|β_l|² equals the
/// pulse photon number.
CVector initial_pump(const PumpSpec& pump, const KGrid& grid, double v_pump);

/// Ring coupling in separable form, stored in solver units: time in 1/Γ̄_S,
/// frequencies in Γ̄_S.
class CouplingTensor : public SeparableCoupling {
 public:
  Complex c;             // prefactor
  CVector f;             // conj(F^{(n)}_{S+}(k_i)), length 2 N_S
  CVector g;             // F_{P-}(k_l), length N_P
  RVector w_signal;      // v_S (k_i - K_S) / Γ̄_S, per signal mode
  RVector w_pump;        // v_P (k_l - K_P) / Γ̄_S
  Index n_signal = 0;    // N_S (per channel)
  double time_unit = 1;  // seconds per solver time unit

  Index signal_dim() const override { return f.size(); }
  Index pump_dim() const override { return g.size(); }

  CVector x(double t) const override;
  CVector p(double t) const override;

  /// Ω_{μνl} in solver units.
  double detuning(Index mu, Index nu, Index l) const {
    return w_pump(l) - w_signal(mu) - w_signal(nu);
  }
};

struct RingGeometry {
  double radius = 0.0;    // m
  double gamma_nl = 0.0;  // nonlinear parameter, 1/(W m)
  double circumference() const { return 2.0 * kPi * radius; }
};

CouplingTensor coupling_tensor(const ResonanceSpec& P, const ResonanceSpec& S,
                               const ResonanceSpec& C, const KGrid& grid_s,
                               const KGrid& grid_p, const PumpSpec& pump,
                               const RingGeometry& ring);

}  // namespace ringsq
