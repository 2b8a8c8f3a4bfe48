#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace ringsq {

struct BandConfig {
  double frequency_THz = 193.0;
  double group_velocity = 1.5e8;  // m/s
  double q_int = 2e6;
  std::optional<double> q_load;
  std::optional<double> dwell_time_ps;  // alternative to q_load: Q_load = ω·dwell/2
};

struct FockSection {
  int signal_modes = 1;
  int pump_modes = 1;
  int signal_cutoff = 40;
  int pump_cutoff = 110;
  double coupling = 0.005;        // Λ, in inverse duration units
  double pump_amplitude = 7.0710678118654752;  // |β|, √50
  double duration = 7.0;
};

/// Resolved run configuration. Units follow the key names.
struct RunConfig {
  // [ring]
  double radius_um = 64.0;
  double gamma_nl = 1.0;  // 1/(W m)

  // [bands.P] [bands.S] [bands.C]
  BandConfig P{193.0, 1.5e8, 2e6, 4e4, std::nullopt};
  BandConfig S{193.0, 1.5e8, 2e6, std::nullopt, 330.0};
  BandConfig C{193.0, 1.5e8, 2e6, 1e6, std::nullopt};

  // [pump]
  double cw_power_mW = 30.0;
  double pulse_energy_pJ = 100.0;
  double pulse_duration_ns = 0.5;
  std::optional<std::vector<double>> sweep_pJ;

  // [grid]
  int n_signal = 101;
  int n_pump = 101;
  double signal_span = 6.0;  // half-span in units of Γ̄_S / v_S
  double pump_span = 5.0;    // half-span in units of 1 / (v_P τ_P)

  // [integrator]
  double step_divisor = 200.0;
  double window_before = 6.0;  // pulse durations before the peak
  double window_after = 6.0;   // pulse durations after the peak
  double ringdown = 8.0;       // extra dwell times after that
  int sample_stride = 100;
  bool verify_step_halving = false;
  bool auto_extend = true;

  // [output]
  std::string directory = "out";
  std::string mode = "both";  // full | first | both | fock
  std::int64_t seed = 1;
  std::string schmidt_weighting = "photon_number";  // or amplitude
  std::string flux_channel = "actual";              // or total
  int g2_points = 161;
  double g2_t_max = 4.0;  // dwell times
  bool render = true;

  // [fock]
  FockSection fock;

  std::set<std::string> overridden;  // "section.key" entries set explicitly

  /// Energies to run, ascending.
  std::vector<double> energies_pJ() const;
};

inline const std::vector<double>& default_sweep_pJ() {
  static const std::vector<double> v{1, 5, 10, 20, 40, 60, 80, 100};
  return v;
}

/// Strict parse of the sectioned key = value format. Unknown sections or keys,
/// wrong types and invalid values raise Error with the line or field name.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks cross-field constraints; called by parse_config.
void validate(const RunConfig& cfg);

/// Every configurable value exactly once, as nested sections.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Parses "1,5,10" or "start:stop:step".
std::vector<double> parse_sweep(const std::string& text);

}  // namespace ringsq
