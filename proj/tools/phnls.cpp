// phnls: selftest | simulate | verify <name> | growth
//
// Exit status: 0 success (PASS, or INCONCLUSIVE when allowed), 1 FAIL verdict or
// failed selftest, 2 usage or configuration error, 3 runtime error raised by the
// library, 4 INCONCLUSIVE verdict without estlab.allow_inconclusive.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "phnls/config.hpp"
#include "phnls/error.hpp"
#include "phnls/estlab.hpp"
#include "phnls/field_io.hpp"
#include "phnls/growth.hpp"
#include "phnls/parallel.hpp"
#include "phnls/selftest.hpp"

using namespace phnls;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kRuntime = 3, kInconclusive = 4 };

const std::vector<std::string> kEstimates{"strichartz",  "bernstein",         "bilinear-h1", "bilinear-l2",
                                          "bilinear-bourgain", "almost-orth", "trilinear"};

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  bool json = false;
  bool inject_fault = false;
  std::string estimate;
};

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + p.string());
}

// CSV files carry the version and the config echo as leading '#' lines.
std::string csv_with_echo(const std::string& body, const json& config) {
  return "# phnls " PHNLS_VERSION "\n# config " + config.dump() + "\n" + body;
}

RunConfig load(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.seed) {
    c.sim.seed = *o.seed;
    c.estlab.plan.seed = *o.seed;
  }
  c.estlab.plan.threads = o.threads;
  return c;
}

// ---------------------------------------------------------------------------

int cmd_selftest(const Options& o) {
  SelftestOptions so;
  so.corrupt_quadrature = o.inject_fault;
  auto checks = run_selftest(so);
  bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  if (o.json) {
    json j{{"version", PHNLS_VERSION}, {"passed", ok}, {"checks", json::array()}, {"failures", json::array()}};
    for (const auto& c : checks) {
      j["checks"].push_back({{"name", c.name},
                             {"passed", c.passed},
                             {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                             {"limit", c.limit},
                             {"seconds", c.seconds}});
      if (!c.passed) j["failures"].push_back(c.name);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& c : checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << format_double(c.value)
                << " limit=" << format_double(c.limit) << '\n';
  }
  if (!ok) {
    std::cerr << "selftest failed:";
    for (const auto& c : checks)
      if (!c.passed) std::cerr << ' ' << c.name;
    std::cerr << '\n';
  }
  return ok ? kOk : kFail;
}

int cmd_simulate(const Options& o) {
  RunConfig c = load(o);
  SimConfig sim = c.sim;
  sim.keep_frames = sim.keep_frames && c.write_frames;
  SimulationResult r = simulate(sim);
  const fs::path dir = c.out_dir;
  const json echo = to_json(c);
  if (c.wants("csv")) write_file(dir / "observables.csv", csv_with_echo(observables_csv(r.series), echo));
  fs::create_directories(dir);
  write_field(dir / "final_state.phf", r.final_state);
  if (sim.keep_frames) write_trajectory(dir / "trajectory", r.trajectory, echo);

  const auto& s = r.series;
  double md = 0, ed = 0;
  for (const auto& x : s) {
    md = std::max(md, std::abs(x.mass - s[0].mass) / s[0].mass);
    ed = std::max(ed, std::abs(x.energy - s[0].energy) / std::abs(s[0].energy));
  }
  json summary{{"kind", "simulation"},
               {"version", PHNLS_VERSION},
               {"config", echo},
               {"frames", s.size()},
               {"t_final", s.back().t},
               {"mass_drift", md},
               {"energy_drift", ed},
               {"h1_final", s.back().h1}};
  if (c.wants("json")) write_file(dir / "simulation.json", summary.dump(2) + "\n");
  if (o.json)
    std::cout << summary.dump(2) << '\n';
  else
    std::cout << "simulated " << s.size() << " frames to t=" << format_double(s.back().t)
              << "; mass drift " << format_double(md) << ", energy drift " << format_double(ed) << "\n";
  return kOk;
}

struct Named {
  std::string file;
  EstimateReport report;
};

std::vector<Named> run_estimate(const std::string& name, const RunConfig& c) {
  const SweepPlan& plan = c.estlab.plan;
  auto spec = [&](const std::string& n) { return c.estlab.basis ? *c.estlab.basis : estlab_default_spec(n); };
  std::vector<Named> out;
  if (name == "strichartz") {
    out.push_back({"strichartz_q" + format_double(c.estlab.q) + "_r" + format_double(c.estlab.r),
                   verify_strichartz(spec(name), c.estlab.q, c.estlab.r, plan)});
  } else if (name == "bernstein") {
    for (const auto& [p, q, s] : c.estlab.bernstein)
      out.push_back({"bernstein_p" + std::to_string(p) + "_q" + std::to_string(q) + "_s" + std::to_string(s),
                     verify_bernstein(spec(name), p, q, s, plan)});
  } else if (name == "bilinear-l2") {
    out.push_back({name, verify_bilinear_l2(spec(name), plan)});
  } else if (name == "bilinear-h1") {
    out.push_back({name, verify_bilinear_h1(spec(name), plan)});
  } else if (name == "bilinear-bourgain") {
    out.push_back({name, verify_bilinear_bourgain(spec(name), plan)});
  } else if (name == "bilinear") {
    auto r = verify_bilinear(spec("bilinear-l2"), plan, true);
    out.push_back({"bilinear-l2", std::move(r.l2)});
    out.push_back({"bilinear-h1", std::move(r.h1)});
    out.push_back({"bilinear-bourgain", std::move(r.bourgain)});
  } else if (name == "almost-orth") {
    out.push_back({name, verify_almost_orthogonality(spec(name), plan)});
  } else if (name == "trilinear") {
    out.push_back({name, verify_trilinear(spec(name), plan)});
  }
  return out;
}

int cmd_verify(const Options& o) {
  const bool all = o.estimate == "all";
  if (!all && std::find(kEstimates.begin(), kEstimates.end(), o.estimate) == kEstimates.end()) {
    std::cerr << "unknown estimate '" << o.estimate << "'; valid names:";
    for (const auto& n : kEstimates) std::cerr << ' ' << n;
    std::cerr << " all\n";
    return kUsage;
  }
  RunConfig c = load(o);
  std::vector<Named> reports;
  if (all) {
    for (const char* n : {"strichartz", "bernstein", "bilinear", "almost-orth", "trilinear"})
      for (auto& r : run_estimate(n, c)) reports.push_back(std::move(r));
  } else {
    reports = run_estimate(o.estimate, c);
  }

  Verdict v = Verdict::pass;
  json summary = json::array();
  for (auto& [file, r] : reports) {
    r.config["run"] = to_json(c);
    if (c.wants("json")) write_file(fs::path(c.out_dir) / (file + ".json"), r.to_json().dump(2) + "\n");
    if (c.wants("csv")) write_file(fs::path(c.out_dir) / (file + ".csv"), csv_with_echo(r.to_csv(), r.config));
    v = combine(v, r.verdict);
    json fits = json::array();
    for (const auto& f : r.fits)
      fits.push_back({{"label", f.label}, {"slope", f.fit.slope}, {"expected", f.expected},
                      {"tolerance", f.tolerance}, {"verdict", to_string(f.verdict)}});
    summary.push_back({{"report", file}, {"estimate", r.estimate}, {"verdict", to_string(r.verdict)}, {"fits", fits}});
    if (!o.json) {
      std::cout << to_string(r.verdict) << ' ' << file << '\n';
      for (const auto& f : r.fits)
        std::cout << "  " << f.label << ": slope " << format_double(f.fit.slope) << " (expected "
                  << (f.upper_bound ? "<= " : "") << format_double(f.expected) << " +- " << format_double(f.tolerance)
                  << ", r2 " << format_double(f.fit.r2) << ") " << to_string(f.verdict) << '\n';
      for (const auto& ch : r.checks)
        std::cout << "  " << ch.name << ": " << format_double(ch.value) << " (limit " << format_double(ch.limit)
                  << ") " << (ch.passed ? "PASS" : "FAIL") << '\n';
    }
  }
  if (o.json) std::cout << json{{"version", PHNLS_VERSION}, {"verdict", to_string(v)}, {"reports", summary}}.dump(2) << '\n';
  if (v == Verdict::fail) return kFail;
  if (v == Verdict::inconclusive && !c.estlab.allow_inconclusive) return kInconclusive;
  return kOk;
}

int cmd_growth(const Options& o) {
  RunConfig c = load(o);
  struct Run {
    int k;
    Nonlinearity nl;
  };
  std::vector<Run> runs;
  for (auto nl : c.growth.nonlinearity)
    for (int k : c.growth.k) runs.push_back({k, nl});

  std::vector<std::optional<GrowthReport>> results(runs.size());
  std::vector<std::string> errors(runs.size());
  parallel_for(runs.size(), o.threads, [&](std::size_t i) {
    SimConfig sim = c.sim;
    if (c.growth.basis) sim.spec = *c.growth.basis;
    sim.nonlinearity = runs[i].nl;
    try {
      results[i] = track_growth(sim, runs[i].k, c.growth.horizon, c.growth.stride);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  int code = kOk;
  json summary = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!results[i]) {
      std::cerr << "growth run k=" << runs[i].k << ' ' << to_string(runs[i].nl) << ": " << errors[i] << '\n';
      summary.push_back({{"k", runs[i].k}, {"nonlinearity", to_string(runs[i].nl)}, {"error", errors[i]}});
      code = std::max(code, static_cast<int>(kRuntime));
      continue;
    }
    const GrowthReport& r = *results[i];
    json j = r.to_json();
    j["run"] = to_json(c);
    const fs::path base = fs::path(c.out_dir) / r.file_stem();
    if (c.wants("json")) write_file(base.string() + ".json", j.dump(2) + "\n");
    if (c.wants("csv")) write_file(base.string() + ".csv", csv_with_echo(r.to_csv(), j["config"]));
    summary.push_back({{"report", r.file_stem()}, {"alpha", r.alpha}, {"bound", r.bound},
                       {"h1_ratio", r.h1_ratio}, {"verdict", to_string(r.verdict)}});
    if (!o.json)
      std::cout << to_string(r.verdict) << ' ' << r.file_stem() << ": alpha " << format_double(r.alpha) << " ["
                << format_double(r.alpha_lo) << ", " << format_double(r.alpha_hi) << "], bound "
                << format_double(r.bound) << " + " << format_double(r.tolerance) << ", H1 max/min "
                << format_double(r.h1_ratio) << '\n';
    if (r.verdict == Verdict::fail && code == kOk) code = kFail;
  }
  if (o.json) std::cout << json{{"version", PHNLS_VERSION}, {"runs", summary}}.dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral NLS simulator and estimate laboratory"};
  app.set_version_flag("--version", PHNLS_VERSION);
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "Output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for simulation data and estimate sampling");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "Machine-readable summary on standard output");

  auto* st = app.add_subcommand("selftest", "Fast invariant suite");
  st->add_flag("--inject-fault", o.inject_fault, "Corrupt one quadrature table entry (test fixture)");
  auto* sim = app.add_subcommand("simulate", "Run the split-step solver and write observables and frames");
  auto* ver = app.add_subcommand("verify", "Run an estimate experiment");
  ver->add_option("name", o.estimate, "Estimate name, or 'all'")->required();
  auto* gro = app.add_subcommand("growth", "Track Sobolev-norm growth over a long horizon");
  // Global flags are also accepted after the subcommand.
  for (auto* sub : {st, sim, ver, gro}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? kOk : kUsage;
  }
  if (*seed_opt) o.seed = seed;

  try {
    if (*st) return cmd_selftest(o);
    if (*sim) return cmd_simulate(o);
    if (*ver) return cmd_verify(o);
    if (*gro) return cmd_growth(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
