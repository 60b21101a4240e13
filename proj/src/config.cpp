#include "phnls/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "phnls/error.hpp"

namespace phnls {

using nlohmann::json;

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seeds are read as size_t");

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Strict view of one JSON object.
class Obj {
 public:
  Obj(const json& j, std::string path, std::initializer_list<const char*> keys) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool known = std::any_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; });
      if (!known) throw ConfigError(join(path_, k), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string key(const char* k) const { return join(path_, k); }

  void get(const char* k, double& out) const {
    if (!has(k)) return;
    if (!at(k).is_number()) throw ConfigError(key(k), "expected a number");
    out = at(k).get<double>();
  }
  void get(const char* k, int& out) const {
    if (!has(k)) return;
    if (!at(k).is_number_integer()) throw ConfigError(key(k), "expected an integer");
    out = at(k).get<int>();
  }
  void get(const char* k, std::size_t& out) const {
    if (!has(k)) return;
    if (!at(k).is_number_unsigned()) throw ConfigError(key(k), "expected a non-negative integer");
    out = at(k).get<std::size_t>();
  }
  void get(const char* k, bool& out) const {
    if (!has(k)) return;
    if (!at(k).is_boolean()) throw ConfigError(key(k), "expected true or false");
    out = at(k).get<bool>();
  }
  void get(const char* k, std::string& out) const {
    if (!has(k)) return;
    if (!at(k).is_string()) throw ConfigError(key(k), "expected a string");
    out = at(k).get<std::string>();
  }
  void get(const char* k, std::vector<int>& out) const {
    if (!has(k)) return;
    const json& a = at(k);
    if (!a.is_array()) throw ConfigError(key(k), "expected an array of integers");
    out.clear();
    for (const auto& v : a) {
      if (!v.is_number_integer()) throw ConfigError(key(k), "expected an array of integers");
      out.push_back(v.get<int>());
    }
  }
  void get(const char* k, std::vector<std::string>& out) const {
    if (!has(k)) return;
    const json& a = at(k);
    if (!a.is_array()) throw ConfigError(key(k), "expected an array of strings");
    out.clear();
    for (const auto& v : a) {
      if (!v.is_string()) throw ConfigError(key(k), "expected an array of strings");
      out.push_back(v.get<std::string>());
    }
  }

 private:
  const json& j_;
  std::string path_;
};

Nonlinearity nonlinearity_at(const std::string& s, const std::string& key) {
  try {
    return parse_nonlinearity(s);
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
}

InitialData::Kind kind_of(const std::string& s, const std::string& key) {
  if (s == "coherent-gaussian") return InitialData::Kind::coherent_gaussian;
  if (s == "random-sobolev") return InitialData::Kind::random_sobolev;
  if (s == "explicit-coefficients") return InitialData::Kind::explicit_coefficients;
  throw ConfigError(key, "unknown kind '" + s + "' (expected coherent-gaussian, random-sobolev or explicit-coefficients)");
}

std::string kind_name(InitialData::Kind k) {
  switch (k) {
    case InitialData::Kind::coherent_gaussian: return "coherent-gaussian";
    case InitialData::Kind::random_sobolev: return "random-sobolev";
    case InitialData::Kind::explicit_coefficients: return "explicit-coefficients";
  }
  return "coherent-gaussian";
}

InitialData initial_from_json(const json& j, const std::string& path) {
  Obj o(j, path,
        {"kind", "amplitude", "x0", "y0", "momentum", "width", "s", "decay", "modes", "norm_target", "norm_s"});
  InitialData in;
  std::string kind = kind_name(in.kind);
  o.get("kind", kind);
  in.kind = kind_of(kind, o.key("kind"));
  o.get("amplitude", in.amplitude);
  o.get("x0", in.x0);
  o.get("y0", in.y0);
  o.get("momentum", in.momentum);
  o.get("width", in.width);
  o.get("s", in.s);
  o.get("decay", in.decay);
  o.get("norm_target", in.norm_target);
  o.get("norm_s", in.norm_s);
  if (o.has("modes")) {
    const json& a = o.at("modes");
    const std::string key = o.key("modes");
    if (!a.is_array()) throw ConfigError(key, "expected an array of [j, k, re, im]");
    for (const auto& m : a) {
      if (!m.is_array() || m.size() != 4 || !m[0].is_number_integer() || !m[1].is_number_unsigned() ||
          !m[2].is_number() || !m[3].is_number())
        throw ConfigError(key, "expected an array of [j, k, re, im]");
      in.modes.push_back({m[0].get<int>(), m[1].get<std::size_t>(), cplx(m[2].get<double>(), m[3].get<double>())});
    }
  }
  if (!(in.width > 0)) throw ConfigError(o.key("width"), "must be positive");
  return in;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

BasisSpec basis_from_json(const json& j, const std::string& path) {
  Obj o(j, path, {"Lx", "Nx", "K", "hermite_nodes"});
  double Lx = 16.0;
  std::size_t Nx = 256, K = 128, nodes = 0;
  o.get("Lx", Lx);
  o.get("Nx", Nx);
  o.get("K", K);
  o.get("hermite_nodes", nodes);
  try {
    return BasisSpec(Lx, Nx, K, nodes);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

SimConfig sim_from_json(const json& j, const std::string& path) {
  Obj o(j, path,
        {"basis", "nonlinearity", "dt", "t_end", "output_stride", "initial", "seed", "keep_frames", "blowup_factor"});
  SimConfig c;
  if (o.has("basis")) c.spec = basis_from_json(o.at("basis"), o.key("basis"));
  std::string nl = to_string(c.nonlinearity);
  o.get("nonlinearity", nl);
  c.nonlinearity = nonlinearity_at(nl, o.key("nonlinearity"));
  o.get("dt", c.dt);
  o.get("t_end", c.t_end);
  o.get("output_stride", c.output_stride);
  if (o.has("initial")) c.initial = initial_from_json(o.at("initial"), o.key("initial"));
  o.get("seed", c.seed);
  o.get("keep_frames", c.keep_frames);
  o.get("blowup_factor", c.blowup_factor);
  return c;
}

SweepPlan plan_from_json(const json& j, const std::string& path) {
  Obj o(j, path,
        {"M", "N", "lambda0", "lambda_low", "samples", "seed", "T", "frames_per_unit", "b", "b_embed", "b_prime",
         "delta", "eps", "s", "diagnostic"});
  SweepPlan p;
  o.get("M", p.M);
  o.get("N", p.N);
  o.get("lambda0", p.lambda0);
  o.get("lambda_low", p.lambda_low);
  o.get("samples", p.samples);
  o.get("seed", p.seed);
  o.get("T", p.T);
  o.get("frames_per_unit", p.frames_per_unit);
  o.get("b", p.b);
  o.get("b_embed", p.b_embed);
  o.get("b_prime", p.b_prime);
  o.get("delta", p.delta);
  o.get("eps", p.eps);
  o.get("s", p.s);
  o.get("diagnostic", p.diagnostic);
  return p;
}

RunConfig parse_run_config(const json& j) {
  Obj top(j, "", {"simulation", "estlab", "growth", "output"});
  RunConfig c;
  if (top.has("simulation")) c.sim = sim_from_json(top.at("simulation"), "simulation");

  if (top.has("estlab")) {
    Obj e(top.at("estlab"), "estlab", {"plan", "basis", "q", "r", "bernstein", "allow_inconclusive"});
    if (e.has("plan")) c.estlab.plan = plan_from_json(e.at("plan"), "estlab.plan");
    if (e.has("basis")) c.estlab.basis = basis_from_json(e.at("basis"), "estlab.basis");
    e.get("q", c.estlab.q);
    e.get("r", c.estlab.r);
    e.get("allow_inconclusive", c.estlab.allow_inconclusive);
    if (e.has("bernstein")) {
      const json& a = e.at("bernstein");
      c.estlab.bernstein.clear();
      if (!a.is_array()) throw ConfigError("estlab.bernstein", "expected an array of [p, q, s]");
      for (const auto& t : a) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            !t[2].is_number_integer())
          throw ConfigError("estlab.bernstein", "expected an array of [p, q, s]");
        c.estlab.bernstein.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
      }
    }
  }

  if (top.has("growth")) {
    Obj g(top.at("growth"), "growth", {"k", "nonlinearity", "horizon", "stride", "basis"});
    g.get("k", c.growth.k);
    std::vector<std::string> names;
    g.get("nonlinearity", names);
    if (!names.empty()) {
      c.growth.nonlinearity.clear();
      for (const auto& n : names) c.growth.nonlinearity.push_back(nonlinearity_at(n, "growth.nonlinearity"));
    }
    g.get("horizon", c.growth.horizon);
    g.get("stride", c.growth.stride);
    if (g.has("basis")) c.growth.basis = basis_from_json(g.at("basis"), "growth.basis");
    for (int k : c.growth.k)
      if (k != 1 && k != 2) throw ConfigError("growth.k", "entries must be 1 or 2");
    if (c.growth.k.empty()) throw ConfigError("growth.k", "must not be empty");
    if (!(c.growth.horizon > 0)) throw ConfigError("growth.horizon", "must be positive");
    if (c.growth.stride == 0) throw ConfigError("growth.stride", "must be positive");
  }

  if (top.has("output")) {
    Obj o(top.at("output"), "output", {"dir", "write_frames", "formats"});
    o.get("dir", c.out_dir);
    o.get("write_frames", c.write_frames);
    o.get("formats", c.formats);
    for (const auto& f : c.formats)
      if (f != "json" && f != "csv") throw ConfigError("output.formats", "unknown format '" + f + "'");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const BasisSpec& spec) {
  return {{"Lx", spec.Lx()}, {"Nx", spec.Nx()}, {"K", spec.K()}, {"hermite_nodes", spec.hermite().nodes()}};
}

json to_json(const InitialData& in) {
  json j{{"kind", kind_name(in.kind)}, {"amplitude", in.amplitude}, {"norm_target", in.norm_target},
         {"norm_s", in.norm_s}};
  switch (in.kind) {
    case InitialData::Kind::coherent_gaussian:
      j.update({{"x0", in.x0}, {"y0", in.y0}, {"momentum", in.momentum}, {"width", in.width}});
      break;
    case InitialData::Kind::random_sobolev:
      j.update({{"s", in.s}, {"decay", in.decay}});
      break;
    case InitialData::Kind::explicit_coefficients: {
      json modes = json::array();
      for (const auto& m : in.modes) modes.push_back({m.j, m.k, m.value.real(), m.value.imag()});
      j["modes"] = modes;
      break;
    }
  }
  return j;
}

json to_json(const SimConfig& c) {
  return {{"basis", to_json(c.spec)},       {"nonlinearity", to_string(c.nonlinearity)},
          {"dt", c.dt},                     {"t_end", c.t_end},
          {"output_stride", c.output_stride}, {"initial", to_json(c.initial)},
          {"seed", c.seed},                 {"keep_frames", c.keep_frames},
          {"blowup_factor", c.blowup_factor}};
}

json to_json(const RunConfig& c) {
  json est{{"plan", c.estlab.plan.to_json()},
           {"q", c.estlab.q},
           {"r", c.estlab.r},
           {"allow_inconclusive", c.estlab.allow_inconclusive}};
  json b = json::array();
  for (const auto& t : c.estlab.bernstein) b.push_back({t[0], t[1], t[2]});
  est["bernstein"] = b;
  if (c.estlab.basis) est["basis"] = to_json(*c.estlab.basis);
  json nl = json::array();
  for (auto n : c.growth.nonlinearity) nl.push_back(to_string(n));
  json gr{{"k", c.growth.k}, {"nonlinearity", nl}, {"horizon", c.growth.horizon}, {"stride", c.growth.stride}};
  if (c.growth.basis) gr["basis"] = to_json(*c.growth.basis);
  return {{"simulation", to_json(c.sim)},
          {"estlab", est},
          {"growth", gr},
          {"output", {{"dir", c.out_dir}, {"write_frames", c.write_frames}, {"formats", c.formats}}}};
}

}  // namespace phnls
