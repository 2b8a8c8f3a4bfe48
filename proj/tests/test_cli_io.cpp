#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ringsq/config.hpp"
#include "ringsq/io.hpp"
#include "ringsq/pipeline.hpp"
#include "ringsq/render.hpp"

using namespace ringsq;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ringsq_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.radius_um == 64.0);
  CHECK(c.n_signal == 101);
  CHECK(*c.S.dwell_time_ps == 330.0);
  CHECK(*c.P.q_load == 4e4);
  CHECK(c.energies_pJ() == std::vector<double>{100.0});
  CHECK(c.overridden.empty());
}

TEST_CASE("example config") {
  const RunConfig c = load_config(RINGSQ_SOURCE_DIR "/configs/ring_64um.toml");
  CHECK(c.cw_power_mW == 30.0);
  CHECK(c.pulse_energy_pJ == 100.0);
  CHECK(c.pulse_duration_ns == 0.5);
  CHECK(*c.C.q_load == 1e6);
  CHECK(c.P.group_velocity == 1.5e8);
  CHECK(c.mode == "both");
  CHECK(c.overridden.count("bands.S.dwell_time_ps") == 1);
}

TEST_CASE("config diagnostics name the line or field") {
  CHECK(message_of("[ring]\nradius = 3\n").find("line 2") != std::string::npos);
  CHECK(message_of("[ring]\nradius = 3\n").find("unknown key 'radius'") != std::string::npos);
  CHECK(message_of("[rings]\n").find("unknown section") != std::string::npos);
  CHECK(message_of("[grid]\nn_signal = 1.5\n").find("n_signal") != std::string::npos);
  CHECK(message_of("[grid]\nn_signal = 11\nn_signal = 13\n").find("duplicate") != std::string::npos);
  CHECK(message_of("[output]\nmode = \"fast\"\n").find("output.mode") != std::string::npos);
  CHECK(message_of("[pump]\ncw_power_mW = \"30\"\n").find("line 2") != std::string::npos);
  const std::string q = message_of("[bands.S]\nq_load = 3e6\ndwell_time_ps = 330\n");
  CHECK(q.find("either") != std::string::npos);
  const std::string q2 = message_of("[bands.P]\nq_load = 3e6\n");
  CHECK(q2.find("bands.P.q_load") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/ringsq.toml"), Error);
}

TEST_CASE("lists, comments and sweeps") {
  const RunConfig c = parse_config("# c\n[pump]\nsweep_pJ = [1, 5, 10]  # pJ\n[output]\ndirectory = \"x # y\"\n");
  CHECK(c.energies_pJ() == std::vector<double>{1, 5, 10});
  CHECK(c.directory == "x # y");
  CHECK(message_of("[pump]\nsweep_pJ = [5, 1]\n").find("ascending") != std::string::npos);
  CHECK(parse_sweep("1,5,10") == std::vector<double>{1, 5, 10});
  CHECK(parse_sweep("20:100:20") == std::vector<double>{20, 40, 60, 80, 100});
  CHECK(parse_sweep("default") == default_sweep_pJ());
  CHECK_THROWS_AS(parse_sweep("5,1"), Error);
  CHECK_THROWS_AS(parse_sweep("1:x:2"), Error);
  CHECK_THROWS_AS(parse_sweep("-1"), Error);
}

TEST_CASE("config manifest lists every key once") {
  const nlohmann::json j = config_to_json(RunConfig{});
  for (const char* s : {"ring", "bands.P", "bands.S", "bands.C", "pump", "grid", "integrator",
                        "output", "fock"})
    CHECK(j.contains(s));
  CHECK(j.size() == 9);
  CHECK(j["bands.S"]["dwell_time_ps"] == 330.0);
  CHECK(j["grid"]["n_signal"] == 101);
  CHECK(j["bands.P"].contains("group_velocity_m_per_s"));
  // Parsing the manifest values back reproduces the same manifest.
  std::string text;
  for (const auto& [sec, keys] : j.items()) {
    text += "[" + sec + "]\n";
    for (const auto& [k, v] : keys.items())
      if (!v.is_null()) text += k + " = " + v.dump() + "\n";
  }
  CHECK(config_to_json(parse_config(text)) == j);
}

TEST_CASE("CSV round trip keeps full precision") {
  const fs::path d = scratch("csv");
  RVector rows(3), cols(2);
  rows << -1.0, 0.0, 1.0 / 3.0;
  cols << 0.1, 0.2;
  RMatrix m(3, 2);
  m << 1.0, 2.0, 3.0, 4.0, 5.0, 1e-300;
  write_axes_csv((d / "m.csv").string(), rows, cols, m);
  const AxesMatrix r = read_axes_csv((d / "m.csv").string());
  CHECK(r.row_axis == rows);
  CHECK(r.col_axis == cols);
  CHECK(r.values == m);
  CHECK(slurp(d / "m.csv").rfind("axis,", 0) == 0);
  CHECK_THROWS_AS(read_axes_csv((d / "missing.csv").string()), Error);

  write_trajectory_csv((d / "t.csv").string(), {TrajectorySample{1e-9, 1, 2, 3, 4, 5}});
  CHECK(slurp(d / "t.csv").rfind("t_s,frobW,pump_photons,Q,sympl_res,symm_res\n", 0) == 0);
}

TEST_CASE("PNG output is deterministic") {
  RVector ax = RVector::LinSpaced(21, -3.0, 3.0);
  RMatrix m(21, 21);
  for (Index i = 0; i < 21; ++i)
    for (Index j = 0; j < 21; ++j) m(i, j) = std::exp(-0.3 * (ax(i) * ax(i) + ax(j) * ax(j)));
  const Image a = heatmap(ax, ax, m, -3.0, 3.0, 64);
  const Image b = heatmap(ax, ax, m, -3.0, 3.0, 64);
  CHECK(a.width == 64);
  CHECK(a.rgb == b.rgb);
  const auto pa = encode_png(a), pb = encode_png(b);
  CHECK(pa == pb);
  REQUIRE(pa.size() > 8);
  CHECK(pa[1] == 'P');
  CHECK(std::string(pa.begin(), pa.end()).find("tIME") == std::string::npos);
  const std::string svg = heatmap_svg(a, -3.0, 3.0, "t", "x", "y");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("data:image/png;base64,") != std::string::npos);
}

TEST_CASE("rendering a bundle without its CSVs fails") {
  const fs::path d = scratch("render");
  CHECK_THROWS_AS(render_bundle(d.string()), Error);
}

TEST_CASE("a grid too coarse for the window is rejected") {
  RunConfig c;
  c.n_signal = 11;
  try {
    build_model(c, 10.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("signal grid too coarse") != std::string::npos);
  }
}

TEST_CASE("end-to-end run on a small grid") {
  RunConfig c;
  c.n_signal = 41;
  c.n_pump = 27;
  c.window_before = 3.0;
  c.window_after = 3.0;
  c.ringdown = 4.0;
  c.g2_points = 21;
  c.sweep_pJ = std::vector<double>{1.0, 20.0};
  const fs::path d = scratch("run");
  c.directory = d.string();
  REQUIRE(run(c, 2) == 0);
  const nlohmann::json man = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(man["status"] == "complete");
  CHECK(man["points"].size() == 2);
  const nlohmann::json sum = nlohmann::json::parse(slurp(d / "summary.json"));
  CHECK(sum["records"][0]["U_P_pJ"] == 1.0);
  for (const char* f : {"J_full_abs.csv", "J_first_abs.csv", "g2_full.csv", "g2_first.csv",
                        "trajectory.csv", "point.json", "J_full.png", "g2_first.svg"})
    CHECK(fs::exists(d / point_dir_name(20.0) / f));
  CHECK(fs::exists(d / "photon_number.svg"));

  // Same inputs, same bytes.
  const std::string first = slurp(d / point_dir_name(20.0) / "J_full_abs.csv");
  const std::string png = slurp(d / point_dir_name(20.0) / "J_full.png");
  REQUIRE(run(c, 1) == 0);
  CHECK(slurp(d / point_dir_name(20.0) / "J_full_abs.csv") == first);
  CHECK(slurp(d / point_dir_name(20.0) / "J_full.png") == png);

  const auto p = run_point(c, 20.0, options_for(c));
  CHECK(p.full->max_sympl < 1e-9);
  CHECK(p.obs_full->photons_actual + p.obs_full->photons_phantom ==
        doctest::Approx(p.obs_full->photons).epsilon(1e-12));
}
