#include "ringsq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "ringsq/types.hpp"

namespace ringsq {

namespace {

const std::string kWho = "cli_io";

using Value = std::variant<double, std::string, bool, std::vector<double>>;

enum class Kind { Number, Integer, String, Bool, List };

struct Field {
  std::string section;
  std::string key;
  Kind kind;
  std::function<void(RunConfig&, const Value&)> set;
  std::function<nlohmann::json(const RunConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  std::ostringstream os;
  if (line > 0)
    os << "config line " << line << ": " << what;
  else
    os << "sweep: " << what;
  throw Error(kWho, os.str());
}

double parse_number(const std::string& s, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail_line(line, "expected a number, got '" + s + "'");
  }
  if (pos != s.size()) fail_line(line, "expected a number, got '" + s + "'");
  if (!std::isfinite(v)) fail_line(line, "number is not finite");
  return v;
}

Value parse_value(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) fail_line(line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail_line(line, "unterminated string");
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '[') {
    if (s.back() != ']') fail_line(line, "unterminated list");
    std::vector<double> out;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(parse_number(item, line));
    }
    return out;
  }
  return parse_number(s, line);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
T as(const Value& v);
template <>
double as<double>(const Value& v) { return std::get<double>(v); }
template <>
std::string as<std::string>(const Value& v) { return std::get<std::string>(v); }
template <>
bool as<bool>(const Value& v) { return std::get<bool>(v); }

std::vector<Field> build_fields() {
  std::vector<Field> f;
  auto num = [&f](std::string sec, std::string key, double RunConfig::*m) {
    f.push_back({sec, key, Kind::Number, [m](RunConfig& c, const Value& v) { c.*m = as<double>(v); },
                 [m](const RunConfig& c) { return nlohmann::json(c.*m); }});
  };
  auto integer = [&f](std::string sec, std::string key, int RunConfig::*m) {
    f.push_back({sec, key, Kind::Integer,
                 [m](RunConfig& c, const Value& v) { c.*m = static_cast<int>(as<double>(v)); },
                 [m](const RunConfig& c) { return nlohmann::json(c.*m); }});
  };
  auto str = [&f](std::string sec, std::string key, std::string RunConfig::*m) {
    f.push_back({sec, key, Kind::String, [m](RunConfig& c, const Value& v) { c.*m = as<std::string>(v); },
                 [m](const RunConfig& c) { return nlohmann::json(c.*m); }});
  };
  auto boolean = [&f](std::string sec, std::string key, bool RunConfig::*m) {
    f.push_back({sec, key, Kind::Bool, [m](RunConfig& c, const Value& v) { c.*m = as<bool>(v); },
                 [m](const RunConfig& c) { return nlohmann::json(c.*m); }});
  };

  num("ring", "radius_um", &RunConfig::radius_um);
  num("ring", "gamma_nl", &RunConfig::gamma_nl);

  for (auto [name, member] : {std::pair{"P", &RunConfig::P}, std::pair{"S", &RunConfig::S},
                              std::pair{"C", &RunConfig::C}}) {
    const std::string sec = std::string("bands.") + name;
    auto m = member;
    f.push_back({sec, "frequency_THz", Kind::Number,
                 [m](RunConfig& c, const Value& v) { (c.*m).frequency_THz = as<double>(v); },
                 [m](const RunConfig& c) { return nlohmann::json((c.*m).frequency_THz); }});
    f.push_back({sec, "group_velocity_m_per_s", Kind::Number,
                 [m](RunConfig& c, const Value& v) { (c.*m).group_velocity = as<double>(v); },
                 [m](const RunConfig& c) { return nlohmann::json((c.*m).group_velocity); }});
    f.push_back({sec, "q_int", Kind::Number,
                 [m](RunConfig& c, const Value& v) { (c.*m).q_int = as<double>(v); },
                 [m](const RunConfig& c) { return nlohmann::json((c.*m).q_int); }});
    f.push_back({sec, "q_load", Kind::Number,
                 [m](RunConfig& c, const Value& v) {
                   (c.*m).q_load = as<double>(v);
                   (c.*m).dwell_time_ps.reset();
                 },
                 [m](const RunConfig& c) { return opt_json((c.*m).q_load); }});
    f.push_back({sec, "dwell_time_ps", Kind::Number,
                 [m](RunConfig& c, const Value& v) {
                   (c.*m).dwell_time_ps = as<double>(v);
                   (c.*m).q_load.reset();
                 },
                 [m](const RunConfig& c) { return opt_json((c.*m).dwell_time_ps); }});
  }

  num("pump", "cw_power_mW", &RunConfig::cw_power_mW);
  num("pump", "pulse_energy_pJ", &RunConfig::pulse_energy_pJ);
  num("pump", "pulse_duration_ns", &RunConfig::pulse_duration_ns);
  f.push_back({"pump", "sweep_pJ", Kind::List,
               [](RunConfig& c, const Value& v) { c.sweep_pJ = std::get<std::vector<double>>(v); },
               [](const RunConfig& c) {
                 return c.sweep_pJ ? nlohmann::json(*c.sweep_pJ) : nlohmann::json(nullptr);
               }});

  integer("grid", "n_signal", &RunConfig::n_signal);
  integer("grid", "n_pump", &RunConfig::n_pump);
  num("grid", "signal_span", &RunConfig::signal_span);
  num("grid", "pump_span", &RunConfig::pump_span);

  num("integrator", "step_divisor", &RunConfig::step_divisor);
  num("integrator", "window_before", &RunConfig::window_before);
  num("integrator", "window_after", &RunConfig::window_after);
  num("integrator", "ringdown", &RunConfig::ringdown);
  integer("integrator", "sample_stride", &RunConfig::sample_stride);
  boolean("integrator", "verify_step_halving", &RunConfig::verify_step_halving);
  boolean("integrator", "auto_extend", &RunConfig::auto_extend);

  str("output", "directory", &RunConfig::directory);
  str("output", "mode", &RunConfig::mode);
  f.push_back({"output", "seed", Kind::Integer,
               [](RunConfig& c, const Value& v) { c.seed = static_cast<std::int64_t>(as<double>(v)); },
               [](const RunConfig& c) { return nlohmann::json(c.seed); }});
  str("output", "schmidt_weighting", &RunConfig::schmidt_weighting);
  str("output", "flux_channel", &RunConfig::flux_channel);
  integer("output", "g2_points", &RunConfig::g2_points);
  num("output", "g2_t_max", &RunConfig::g2_t_max);
  boolean("output", "render", &RunConfig::render);

  auto fock_int = [&f](std::string key, int FockSection::*m) {
    f.push_back({"fock", key, Kind::Integer,
                 [m](RunConfig& c, const Value& v) { c.fock.*m = static_cast<int>(as<double>(v)); },
                 [m](const RunConfig& c) { return nlohmann::json(c.fock.*m); }});
  };
  auto fock_num = [&f](std::string key, double FockSection::*m) {
    f.push_back({"fock", key, Kind::Number,
                 [m](RunConfig& c, const Value& v) { c.fock.*m = as<double>(v); },
                 [m](const RunConfig& c) { return nlohmann::json(c.fock.*m); }});
  };
  fock_int("signal_modes", &FockSection::signal_modes);
  fock_int("pump_modes", &FockSection::pump_modes);
  fock_int("signal_cutoff", &FockSection::signal_cutoff);
  fock_int("pump_cutoff", &FockSection::pump_cutoff);
  fock_num("coupling", &FockSection::coupling);
  fock_num("pump_amplitude", &FockSection::pump_amplitude);
  fock_num("duration", &FockSection::duration);
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = build_fields();
  return f;
}

bool kind_matches(Kind k, const Value& v) {
  switch (k) {
    case Kind::Number: return std::holds_alternative<double>(v);
    case Kind::Integer:
      return std::holds_alternative<double>(v) && std::get<double>(v) == std::floor(std::get<double>(v));
    case Kind::String: return std::holds_alternative<std::string>(v);
    case Kind::Bool: return std::holds_alternative<bool>(v);
    case Kind::List: return std::holds_alternative<std::vector<double>>(v);
  }
  return false;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Number: return "a number";
    case Kind::Integer: return "an integer";
    case Kind::String: return "a string";
    case Kind::Bool: return "true or false";
    case Kind::List: return "a list of numbers";
  }
  return "?";
}

[[noreturn]] void fail_field(const std::string& field, const std::string& what) {
  throw Error(kWho, "config field " + field + ": " + what);
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "must be positive, got " << v;
    fail_field(field, os.str());
  }
}

}  // namespace

std::vector<double> RunConfig::energies_pJ() const {
  if (sweep_pJ) return *sweep_pJ;
  return {pulse_energy_pJ};
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> sections;
  for (const auto& f : fields()) sections.insert(f.section);

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!sections.count(section)) fail_line(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_line(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (section.empty()) fail_line(line, "key '" + key + "' appears before any section");
    const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) {
      return f.section == section && f.key == key;
    });
    if (it == fields().end()) fail_line(line, "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (cfg.overridden.count(full)) fail_line(line, "duplicate key '" + key + "'");
    const Value v = parse_value(s.substr(eq + 1), line);
    if (!kind_matches(it->kind, v)) fail_line(line, "'" + key + "' must be " + kind_name(it->kind));
    it->set(cfg, v);
    cfg.overridden.insert(full);
  }
  for (const char* b : {"P", "S", "C"}) {
    const std::string sec = std::string("bands.") + b;
    if (cfg.overridden.count(sec + ".q_load") && cfg.overridden.count(sec + ".dwell_time_ps"))
      fail_field(sec + ".q_load", "give either q_load or dwell_time_ps, not both");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(kWho, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  require_positive("ring.radius_um", c.radius_um);
  if (!(c.gamma_nl >= 0.0)) fail_field("ring.gamma_nl", "must be non-negative");
  for (auto [name, b] : {std::pair{"P", &c.P}, std::pair{"S", &c.S}, std::pair{"C", &c.C}}) {
    const std::string sec = std::string("bands.") + name;
    require_positive(sec + ".frequency_THz", b->frequency_THz);
    require_positive(sec + ".group_velocity_m_per_s", b->group_velocity);
    require_positive(sec + ".q_int", b->q_int);
    if (!b->q_load && !b->dwell_time_ps) fail_field(sec + ".q_load", "missing (or give dwell_time_ps)");
    double q_load = 0.0;
    if (b->q_load) {
      require_positive(sec + ".q_load", *b->q_load);
      q_load = *b->q_load;
    } else {
      require_positive(sec + ".dwell_time_ps", *b->dwell_time_ps);
      q_load = 2.0 * kPi * b->frequency_THz * 1e12 * (*b->dwell_time_ps * 1e-12) / 2.0;
    }
    if (q_load >= b->q_int) {
      std::ostringstream os;
      os << "loaded Q " << q_load << " must be below " << sec << ".q_int = " << b->q_int;
      fail_field(sec + (b->q_load ? ".q_load" : ".dwell_time_ps"), os.str());
    }
  }
  if (!(c.cw_power_mW >= 0.0)) fail_field("pump.cw_power_mW", "must be non-negative");
  require_positive("pump.pulse_energy_pJ", c.pulse_energy_pJ);
  require_positive("pump.pulse_duration_ns", c.pulse_duration_ns);
  if (c.sweep_pJ) {
    if (c.sweep_pJ->empty()) fail_field("pump.sweep_pJ", "must not be empty");
    for (double e : *c.sweep_pJ) require_positive("pump.sweep_pJ", e);
    if (!std::is_sorted(c.sweep_pJ->begin(), c.sweep_pJ->end()) ||
        std::adjacent_find(c.sweep_pJ->begin(), c.sweep_pJ->end()) != c.sweep_pJ->end())
      fail_field("pump.sweep_pJ", "must be strictly ascending");
  }
  if (c.n_signal < 3 || c.n_signal % 2 == 0) fail_field("grid.n_signal", "must be odd and at least 3");
  if (c.n_pump < 3 || c.n_pump % 2 == 0) fail_field("grid.n_pump", "must be odd and at least 3");
  require_positive("grid.signal_span", c.signal_span);
  require_positive("grid.pump_span", c.pump_span);
  require_positive("integrator.step_divisor", c.step_divisor);
  require_positive("integrator.window_before", c.window_before);
  require_positive("integrator.window_after", c.window_after);
  if (!(c.ringdown >= 0.0)) fail_field("integrator.ringdown", "must be non-negative");
  if (c.sample_stride < 1) fail_field("integrator.sample_stride", "must be at least 1");
  if (c.directory.empty()) fail_field("output.directory", "must not be empty");
  if (c.mode != "full" && c.mode != "first" && c.mode != "both" && c.mode != "fock")
    fail_field("output.mode", "must be one of full, first, both, fock");
  if (c.schmidt_weighting != "photon_number" && c.schmidt_weighting != "amplitude")
    fail_field("output.schmidt_weighting", "must be photon_number or amplitude");
  if (c.flux_channel != "actual" && c.flux_channel != "total")
    fail_field("output.flux_channel", "must be actual or total");
  if (c.g2_points < 2) fail_field("output.g2_points", "must be at least 2");
  require_positive("output.g2_t_max", c.g2_t_max);
  if (c.fock.signal_modes < 1 || c.fock.signal_modes > 2) fail_field("fock.signal_modes", "must be 1 or 2");
  if (c.fock.pump_modes < 1 || c.fock.pump_modes > 2) fail_field("fock.pump_modes", "must be 1 or 2");
  if (c.fock.signal_cutoff < 1) fail_field("fock.signal_cutoff", "must be at least 1");
  if (c.fock.pump_cutoff < 1) fail_field("fock.pump_cutoff", "must be at least 1");
  if (!(c.fock.coupling >= 0.0)) fail_field("fock.coupling", "must be non-negative");
  if (!(c.fock.pump_amplitude >= 0.0)) fail_field("fock.pump_amplitude", "must be non-negative");
  require_positive("fock.duration", c.fock.duration);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields()) j[f.section][f.key] = f.get(cfg);
  return j;
}

std::vector<double> parse_sweep(const std::string& text) {
  if (text == "default") return default_sweep_pJ();
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(trim(item), 0));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw Error(kWho, "sweep range must be start:stop:step with step > 0 and stop >= start");
    const long n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(parse_number(item, 0));
    }
  }
  if (out.empty()) throw Error(kWho, "empty sweep");
  for (double e : out)
    if (!(e > 0.0)) throw Error(kWho, "sweep energies must be positive");
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end())
    throw Error(kWho, "sweep energies must be strictly ascending");
  return out;
}

}  // namespace ringsq
