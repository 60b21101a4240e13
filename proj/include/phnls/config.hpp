#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "phnls/estlab.hpp"
#include "phnls/evolve.hpp"

namespace phnls {

struct GrowthParams {
  std::vector<int> k{1};
  std::vector<Nonlinearity> nonlinearity{Nonlinearity::defocusing};
  double horizon = 100.0;
  std::size_t stride = 100;
  std::optional<BasisSpec> basis;  // replaces the simulation basis for growth runs
};

struct EstlabParams {
  SweepPlan plan;
  std::optional<BasisSpec> basis;  // otherwise the per-estimate default
  double q = 4.0, r = 4.0;         // Strichartz pair
  std::vector<std::array<int, 3>> bernstein{{2, 4, 0}, {2, 2, 1}, {2, 8, 0}};  // (p, q, s)
  bool allow_inconclusive = false;  // exit 0 on an inconclusive verdict
};

struct RunConfig {
  SimConfig sim;
  EstlabParams estlab;
  GrowthParams growth;
  std::string out_dir = "out";
  bool write_frames = true;
  std::vector<std::string> formats{"json", "csv"};

  bool wants(const std::string& format) const;
};

// Strict: unknown keys and wrong types raise ConfigError naming the dotted key.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const BasisSpec& spec);
nlohmann::json to_json(const InitialData& init);
nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);

BasisSpec basis_from_json(const nlohmann::json& j, const std::string& path = "basis");
SimConfig sim_from_json(const nlohmann::json& j, const std::string& path = "simulation");
SweepPlan plan_from_json(const nlohmann::json& j, const std::string& path = "estlab.plan");

}  // namespace phnls
