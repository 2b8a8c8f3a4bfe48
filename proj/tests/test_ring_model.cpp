#include <doctest.h>

#include <cmath>

#include "ringsq/config.hpp"
#include "ringsq/pipeline.hpp"
#include "ringsq/ring_model.hpp"

using namespace ringsq;

namespace {

constexpr double kOmega = 2.0 * kPi * 193e12;
constexpr double kV = 1.5e8;

}  // namespace

TEST_CASE("critical coupling splits the linewidth evenly") {
  const auto r = build_resonance(Band::C, kOmega, kV, 2e6, 1e6);
  CHECK(r.critical);
  CHECK(r.gamma_actual == doctest::Approx(r.gamma_phantom).epsilon(1e-12));
  CHECK(r.escape_efficiency() == doctest::Approx(0.5));
  CHECK(r.K == doctest::Approx(kOmega / kV));
}

TEST_CASE("S band from a 330 ps dwell time") {
  const double q_load = kOmega * 330e-12 / 2.0;
  const auto r = build_resonance(Band::S, kOmega, kV, 2e6, q_load);
  CHECK(1.0 / r.gamma_bar == doctest::Approx(330e-12).epsilon(1e-12));
  CHECK(q_load == doctest::Approx(2e5).epsilon(1e-3));
  CHECK(r.escape_efficiency() == doctest::Approx(0.9).epsilon(1e-3));
  CHECK_FALSE(r.critical);
  CHECK(r.g_actual * r.g_actual == doctest::Approx(2.0 * r.gamma_actual * kV));
}

TEST_CASE("loaded Q at or above intrinsic Q is rejected") {
  CHECK_THROWS_AS(build_resonance(Band::S, kOmega, kV, 2e6, 2e6), Error);
  CHECK_THROWS_AS(build_resonance(Band::S, kOmega, kV, 2e6, 3e6), Error);
  CHECK_THROWS_AS(build_resonance(Band::S, kOmega, -kV, 2e6, 1e5), Error);
}

TEST_CASE("enhancement factors are Lorentzian with the decay rate as half width") {
  const auto r = build_resonance(Band::P, kOmega, kV, 2e6, 4e4);
  const double L = 2.0 * kPi * 64e-6;
  const double peak = std::norm(enhancement_in(r, r.K, L));
  const double dk = r.gamma_bar / r.v;
  CHECK(std::norm(enhancement_in(r, r.K + dk, L)) == doctest::Approx(0.5 * peak).epsilon(1e-9));
  CHECK(std::norm(enhancement_in(r, r.K - dk, L)) == doctest::Approx(0.5 * peak).epsilon(1e-9));
  CHECK(peak == doctest::Approx(2.0 * r.gamma_actual * r.v / (r.gamma_bar * r.gamma_bar * L)));

  // Output factors differ only by the channel coupling.
  const double k = r.K + 0.37 * dk;
  const Complex a = enhancement_out(r, Channel::Actual, k, L);
  const Complex p = enhancement_out(r, Channel::Phantom, k, L);
  CHECK(std::abs(p / a) == doctest::Approx(std::sqrt(r.gamma_phantom / r.gamma_actual)));
  CHECK(std::arg(p / a) == doctest::Approx(0.0));
  // Input and actual output poles are complex conjugates of each other.
  CHECK(std::abs(enhancement_in(r, k, L) - std::conj(a)) < 1e-12 * std::abs(a));
}

TEST_CASE("phantom to actual ratio for a lossy over-coupled ring") {
  // Q_load = Q_int / 10 gives Γ_ph / Γ_actual = 1/9, an amplitude ratio of 1/3.
  const auto r = build_resonance(Band::S, kOmega, kV, 2e6, 2e5);
  const double L = 2.0 * kPi * 64e-6;
  const Complex a = enhancement_out(r, Channel::Actual, r.K, L);
  const Complex p = enhancement_out(r, Channel::Phantom, r.K, L);
  CHECK(std::abs(a / p) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("linear dispersion") {
  const auto r = build_resonance(Band::S, kOmega, kV, 2e6, 2e5);
  CHECK(dispersion(r, r.K) == doctest::Approx(kOmega));
  CHECK(dispersion(r, r.K + 1e3) - kOmega == doctest::Approx(kV * 1e3).epsilon(1e-6));
}

TEST_CASE("CW amplitude for 30 mW") {
  const double a = cw_amplitude(0.03, kOmega, kV);
  CHECK(a == doctest::Approx(std::sqrt(2.0 * kPi * 0.03 / (kHbar * kOmega * kV))));
  CHECK(a == doctest::Approx(9.9e4).epsilon(0.01));
  CHECK(cw_amplitude(0.0, kOmega, kV) == 0.0);
  CHECK_THROWS_AS(cw_amplitude(-1.0, kOmega, kV), Error);
}

TEST_CASE("grid construction") {
  const auto g = KGrid::centered(11, 5.0);
  CHECK(g.dk == doctest::Approx(1.0));
  CHECK(g.detuning(5) == 0.0);
  CHECK(g.detuning(0) == doctest::Approx(-5.0));
  CHECK(g.detuning(10) == doctest::Approx(5.0));
  CHECK(g.period(2.0) == doctest::Approx(kPi));
  CHECK_THROWS_AS(KGrid::centered(10, 5.0), Error);
  CHECK_THROWS_AS(KGrid::centered(1, 5.0), Error);
  CHECK(signal_index(Channel::Phantom, 3, 11) == 14);
}

TEST_CASE("pump amplitudes hold the pulse photon number") {
  PumpSpec pump{0.03, 100e-12, 0.5e-9, kOmega};
  CHECK(pump.photons() == doctest::Approx(7.82e8).epsilon(1e-3));
  const double vt = kV * pump.pulse_duration;
  const auto g = KGrid::centered(101, 5.0 / vt);
  const CVector b = initial_pump(pump, g, kV);
  CHECK(b.squaredNorm() == doctest::Approx(pump.photons()).epsilon(1e-12));
  // Gaussian envelope: amplitude falls to e^{-1/2} at δ = 1/(v τ).
  CHECK(g.detuning(60) * vt == doctest::Approx(1.0));
  CHECK(std::abs(b(60) / b(50)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
  CHECK(std::abs(b(40) - b(60)) < 1e-12 * std::abs(b(50)));
  // Discrete amplitudes before renormalization already carry the photon number.
  const double amp = std::sqrt(g.dk * pump.photons() * vt / std::sqrt(kPi));
  CHECK(std::abs(b(50)) == doctest::Approx(amp).epsilon(1e-6));
}

TEST_CASE("pump grid that truncates the pulse is rejected") {
  PumpSpec pump{0.03, 100e-12, 0.5e-9, kOmega};
  const double vt = kV * pump.pulse_duration;
  CHECK_THROWS_AS(initial_pump(pump, KGrid::centered(101, 3.0 / vt), kV), Error);
  CHECK_THROWS_AS(initial_pump(pump, KGrid::centered(5, 5.0 / vt), kV), Error);
}

TEST_CASE("coupling tensor prefactor and layout") {
  const RunConfig cfg;
  const Model m = build_model(cfg, 100.0);
  const CouplingTensor& t = m.coupling;
  CHECK(t.signal_dim() == 2 * cfg.n_signal);
  CHECK(t.pump_dim() == cfg.n_pump);
  CHECK(t.time_unit == doctest::Approx(330e-12).epsilon(1e-12));
  // The CW pump sits on the C resonance, so the prefactor carries the phase of F_C(K_C) = i|F_C|.
  CHECK(std::abs(t.c.real()) < 1e-12 * std::abs(t.c));
  CHECK(t.c.imag() < 0.0);

  // Prefactor scales as Δk_S √Δk_P.
  RunConfig fine = cfg;
  fine.n_signal = 201;
  fine.n_pump = 201;
  const Model m2 = build_model(fine, 100.0);
  CHECK(std::abs(m2.coupling.c) / std::abs(t.c) ==
        doctest::Approx(0.5 * std::sqrt(0.5)).epsilon(1e-12));

  // Phantom entries are the actual ones scaled by the coupling ratio.
  const Index n = cfg.n_signal;
  const double ratio = m.S.g_phantom / m.S.g_actual;
  CHECK(std::abs(t.f(n + 7) - ratio * t.f(7)) < 1e-14 * std::abs(t.f(7)));
  CHECK(t.w_signal(n + 7) == t.w_signal(7));
  // Band center is resonant: Ω = 0 at zero detuning.
  CHECK(t.detuning(n / 2, n / 2, cfg.n_pump / 2) == 0.0);
}

TEST_CASE("triple resonance is enforced") {
  const auto P = build_resonance(Band::P, kOmega, kV, 2e6, 4e4);
  const auto S = build_resonance(Band::S, kOmega, kV, 2e6, 2e5);
  const auto C = build_resonance(Band::C, 1.01 * kOmega, kV, 2e6, 1e6);
  const auto g = KGrid::centered(5, 1.0);
  PumpSpec pump{0.03, 1e-12, 0.5e-9, kOmega};
  CHECK_THROWS_AS(coupling_tensor(P, S, C, g, g, pump, RingGeometry{64e-6, 1.0}), Error);
  const auto C0 = build_resonance(Band::C, kOmega, kV, 2e6, 1e6);
  CHECK_THROWS_AS(coupling_tensor(P, S, C0, g, g, pump, RingGeometry{0.0, 1.0}), Error);
  CHECK_NOTHROW(coupling_tensor(P, S, C0, g, g, pump, RingGeometry{64e-6, 0.0}));
}
