#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "phnls/config.hpp"
#include "phnls/error.hpp"
#include "phnls/field_io.hpp"

using namespace phnls;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("phnls_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error_key(const json& j) {
  try {
    parse_run_config(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("field binary round trip is bit exact") {
  BasisSpec sp(3.0, 8, 6);
  InitialData init;
  init.kind = InitialData::Kind::random_sobolev;
  SpectralField f = make_initial(init, sp, 11);
  std::stringstream buf;
  write_field(buf, f);
  SpectralField g = read_field(buf);
  CHECK(g.spec() == sp);
  CHECK(g.data() == f.data());
}

TEST_CASE("field binary layout") {
  BasisSpec sp(2.0, 4, 3);
  SpectralField f(sp);
  f(0, 1) = cplx(1.5, -2.0);
  std::stringstream buf;
  write_field(buf, f);
  const std::string s = buf.str();
  REQUIRE(s.substr(0, 8) == "PHNLSF1\n");
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[8 + i])) << (8 * i);
  json h = json::parse(s.substr(16, len));
  CHECK(h["Nx"] == 4);
  CHECK(h["K"] == 3);
  CHECK(h["endianness"] == "little");
  CHECK(h.contains("version"));
  CHECK(s.size() == 16 + len + 4 * 3 * 16);
  double re, im;
  std::memcpy(&re, s.data() + 16 + len + 16, 8);  // row j=-2, k=1
  std::memcpy(&im, s.data() + 16 + len + 24, 8);
  CHECK(re == 1.5);
  CHECK(im == -2.0);

  std::string bad = s;
  bad[0] = 'X';
  std::stringstream in(bad);
  CHECK_THROWS_AS(read_field(in), ShapeError);
  std::stringstream cut(s.substr(0, s.size() - 5));
  CHECK_THROWS_AS(read_field(cut), ShapeError);
}

TEST_CASE("trajectory directory round trip") {
  SimConfig c;
  c.spec = BasisSpec(8.0, 16, 8);
  c.t_end = 0.02;
  c.dt = 1e-3;
  c.output_stride = 5;
  auto r = simulate(c);
  fs::path dir = scratch("traj");
  write_trajectory(dir, r.trajectory, to_json(c));
  json m = json::parse(std::ifstream(dir / "manifest.json"));
  CHECK(m["frame_count"] == 5);
  CHECK(m["config"]["dt"] == 1e-3);
  CHECK(m.contains("version"));
  Trajectory t = read_trajectory(dir);
  CHECK(t.size() == r.trajectory.size());
  CHECK(t.dt == r.trajectory.dt);
  CHECK(t.frames.back().data() == r.trajectory.frames.back().data());
  fs::remove_all(dir);
}

TEST_CASE("observables csv") {
  std::vector<Observables> s{{0.0, 1.0, 0.5, 1.0 / 3.0, 2.0, 4.0}, {0.001, 1.0, 0.5, 0.1, 2.0, 4.0}};
  std::string csv = observables_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,mass,energy,h1,h2,h4");
  std::getline(in, line);
  CHECK(line == "0,1,0.5,0.3333333333333333,2,4");
  std::getline(in, line);
  CHECK(line == "0.001,1,0.5,0.1,2,4");
}

TEST_CASE("config defaults and round trip") {
  RunConfig d = parse_run_config(json::object());
  CHECK(d.sim.dt == 1e-3);
  CHECK(d.sim.spec == BasisSpec(16.0, 256, 128));
  CHECK(d.growth.k == std::vector<int>{1});
  CHECK(d.wants("csv"));

  json j = R"({
    "simulation": {"basis": {"Lx": 8, "Nx": 32, "K": 16}, "nonlinearity": "focusing", "dt": 0.002,
                   "initial": {"kind": "explicit-coefficients", "modes": [[1, 2, 0.5, -0.25]]}},
    "estlab": {"plan": {"N": [8, 16], "samples": 9}, "bernstein": [[2, 4, 0]], "q": 8, "r": 2.6666666666666665},
    "growth": {"k": [1, 2], "nonlinearity": ["linear"], "horizon": 5, "stride": 10},
    "output": {"dir": "o", "formats": ["json"], "write_frames": false}
  })"_json;
  RunConfig c = parse_run_config(j);
  CHECK(c.sim.nonlinearity == Nonlinearity::focusing);
  CHECK(c.sim.spec.K() == 16);
  REQUIRE(c.sim.initial.modes.size() == 1);
  CHECK(c.sim.initial.modes[0].value == cplx(0.5, -0.25));
  CHECK(c.estlab.plan.N == std::vector<int>{8, 16});
  CHECK(c.estlab.plan.samples == 9);
  CHECK(c.growth.nonlinearity == std::vector<Nonlinearity>{Nonlinearity::linear});
  CHECK(!c.wants("csv"));
  CHECK(to_json(parse_run_config(to_json(c))) == to_json(c));
}

TEST_CASE("config rejects unknown keys by name") {
  CHECK(config_error_key(R"({"simulaton": {}})"_json) == "simulaton");
  CHECK(config_error_key(R"({"simulation": {"dt": 0.001, "sign": 1}})"_json) == "simulation.sign");
  CHECK(config_error_key(R"({"simulation": {"initial": {"amp": 1}}})"_json) == "simulation.initial.amp");
  CHECK(config_error_key(R"({"estlab": {"plan": {"samplez": 3}}})"_json) == "estlab.plan.samplez");
  CHECK(config_error_key(R"({"growth": {"k": [3]}})"_json) == "growth.k");
}

TEST_CASE("config rejects wrong types") {
  CHECK(config_error_key(R"({"simulation": {"dt": "small"}})"_json) == "simulation.dt");
  CHECK(config_error_key(R"({"simulation": {"output_stride": -1}})"_json) == "simulation.output_stride");
  CHECK(config_error_key(R"({"simulation": {"nonlinearity": "plus"}})"_json) == "simulation.nonlinearity");
  CHECK(config_error_key(R"({"estlab": {"plan": {"N": [8.5]}}})"_json) == "estlab.plan.N");
  CHECK(config_error_key(R"({"output": {"formats": ["xml"]}})"_json) == "output.formats");
  CHECK(config_error_key(R"([1, 2])"_json) == "");
}

TEST_CASE("config file loading") {
  fs::path p = scratch("cfg.json");
  std::ofstream(p) << R"({"growth": {"horizon": 3}})";
  CHECK(load_run_config(p.string()).growth.horizon == 3.0);
  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(load_run_config(p.string()), ConfigError);
  CHECK_THROWS_AS(load_run_config((p.string() + ".missing")), ConfigError);
  fs::remove(p);
}

TEST_CASE("shipped example configs parse") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(PHNLS_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    RunConfig c = load_run_config(e.path().string());
    CHECK_NOTHROW(c.sim.validate());
    ++n;
  }
  CHECK(n >= 3);
}
